//! Small named machines with known behaviour on the empty input.
//!
//! Every looper here has a halting state that no transition reaches, so
//! non-termination is evident from the table.

use super::{parse_tm, TuringMachine};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub machine: TuringMachine,
    /// Exact halting step, or `None` for a machine that never halts.
    pub halts_at: Option<u64>,
}

fn build(text: &str) -> TuringMachine {
    parse_tm(text).expect("fixture machine text is valid")
}

/// Halts after exactly `k` steps: states `q0..q{k-1}` each write `1`, move
/// right and advance; `q{k-1}` advances into `halt`.
pub fn chain_halter(k: u64) -> TuringMachine {
    build(&chain_halter_text(k))
}

pub fn chain_halter_text(k: u64) -> String {
    let mut states: Vec<String> = (0..k).map(|i| format!("q{i}")).collect();
    states.push("halt".into());
    let initial = states[0].clone();
    let mut text = format!(
        "# halts after exactly {k} steps\nstates: {}\nalphabet: _ 1\nblank: _\ninitial: {initial}\nhalting: halt\n",
        states.join(" ")
    );
    for i in 0..k as usize {
        let next = &states[i + 1];
        for sym in ["_", "1"] {
            text.push_str(&format!("q{i} {sym} -> 1 R {next}\n"));
        }
    }
    text
}

pub const LOOP_TEXT: &str = "\
# moves right forever
states: q0 halt
alphabet: _
blank: _
initial: q0
halting: halt
q0 _ -> _ R q0
";

/// One-state machine that moves right forever.
pub fn loop_machine() -> TuringMachine {
    build(LOOP_TEXT)
}

pub const BUSY_BEAVER_2_TEXT: &str = "\
# two-state, two-symbol busy beaver
states: A B H
alphabet: 0 1
blank: 0
initial: A
halting: H
A 0 -> 1 R B
A 1 -> 1 L B
B 0 -> 1 L A
B 1 -> 1 R H
";

pub fn busy_beaver_2() -> TuringMachine {
    build(BUSY_BEAVER_2_TEXT)
}

pub const BUSY_BEAVER_3_TEXT: &str = "\
# three-state, two-symbol step champion
states: A B C H
alphabet: 0 1
blank: 0
initial: A
halting: H
A 0 -> 1 R B
A 1 -> 1 R H
B 0 -> 1 L B
B 1 -> 0 R C
C 0 -> 1 L C
C 1 -> 1 L A
";

pub fn busy_beaver_3() -> TuringMachine {
    build(BUSY_BEAVER_3_TEXT)
}

const SWEEP_HALTER_TEXT: &str = "\
# writes two ones, walks back over them, halts on the blank
states: A B C D H
alphabet: _ 1
blank: _
initial: A
halting: H
A _ -> 1 R B
A 1 -> 1 R B
B _ -> 1 R C
B 1 -> 1 R C
C _ -> _ L D
C 1 -> 1 L D
D 1 -> 1 L D
D _ -> _ R H
";

const WRITER_TEXT: &str = "\
# writes ones to the right forever
states: q0 halt
alphabet: _ 1
blank: _
initial: q0
halting: halt
q0 _ -> 1 R q0
q0 1 -> 1 R q0
";

const BOUNCER_TEXT: &str = "\
# alternates between two cells
states: A B H
alphabet: _
blank: _
initial: A
halting: H
A _ -> _ R B
B _ -> _ L A
";

const SWEEPER_TEXT: &str = "\
# extends a block of ones alternately to the left and right
states: A B C H
alphabet: _ 1
blank: _
initial: A
halting: H
A _ -> 1 L B
A 1 -> 1 L B
B 1 -> 1 L B
B _ -> 1 R C
C 1 -> 1 R C
C _ -> 1 L B
";

const CYCLE3_TEXT: &str = "\
# cycles through three states, drifting right
states: A B C H
alphabet: _ 1
blank: _
initial: A
halting: H
A _ -> 1 R B
A 1 -> _ R B
B _ -> 1 L C
B 1 -> 1 L C
C _ -> _ R A
C 1 -> 1 R A
";

fn fixture(name: &str, machine: TuringMachine, halts_at: Option<u64>) -> Fixture {
    Fixture {
        name: name.to_owned(),
        machine,
        halts_at,
    }
}

/// Ten halters followed by five loopers.
pub fn suite() -> Vec<Fixture> {
    let mut out: Vec<Fixture> = [1, 2, 3, 4, 5, 6, 8, 10]
        .into_iter()
        .map(|k| fixture(&format!("halt{k}"), chain_halter(k), Some(k)))
        .collect();
    out.push(fixture("bb2", busy_beaver_2(), Some(6)));
    out.push(fixture("bb3", busy_beaver_3(), Some(21)));
    out.push(fixture("loop", loop_machine(), None));
    out.push(fixture("writer", build(WRITER_TEXT), None));
    out.push(fixture("bouncer", build(BOUNCER_TEXT), None));
    out.push(fixture("sweeper", build(SWEEPER_TEXT), None));
    out.push(fixture("cycle3", build(CYCLE3_TEXT), None));
    out
}

/// The 15-machine suite plus five further halters.
pub fn collection() -> Vec<Fixture> {
    let mut out = suite();
    for k in [7, 9, 12, 16] {
        out.push(fixture(&format!("halt{k}"), chain_halter(k), Some(k)));
    }
    out.push(fixture("sweep_halter", build(SWEEP_HALTER_TEXT), Some(6)));
    out
}
