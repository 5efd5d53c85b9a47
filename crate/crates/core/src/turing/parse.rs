use std::collections::{BTreeMap, BTreeSet};

use super::{Move, Transition, TuringError, TuringMachine};

struct Rule {
    line: usize,
    state: String,
    read: String,
    write: String,
    movement: Move,
    next: String,
}

#[derive(Default)]
struct Headers {
    states: Option<(usize, Vec<String>)>,
    alphabet: Option<(usize, Vec<String>)>,
    blank: Option<(usize, String)>,
    initial: Option<(usize, String)>,
    halting: Option<(usize, String)>,
}

fn syntax(line: usize, message: impl Into<String>) -> TuringError {
    TuringError::Syntax {
        line,
        message: message.into(),
    }
}

fn check_name(line: usize, name: &str) -> Result<(), TuringError> {
    if name.is_empty() || name == "->" || name.contains([':', ',', '#']) {
        return Err(syntax(line, format!("invalid name `{name}`")));
    }
    Ok(())
}

fn name_list(line: usize, value: &str) -> Result<Vec<String>, TuringError> {
    let names: Vec<String> = value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect();
    if names.is_empty() {
        return Err(syntax(line, "empty name list"));
    }
    for n in &names {
        check_name(line, n)?;
    }
    Ok(names)
}

fn single_name(line: usize, value: &str) -> Result<String, TuringError> {
    let mut names = name_list(line, value)?;
    if names.len() != 1 {
        return Err(syntax(line, "expected exactly one name"));
    }
    Ok(names.pop().unwrap())
}

fn set_once<T>(slot: &mut Option<(usize, T)>, line: usize, key: &str, v: T) -> Result<(), TuringError> {
    if slot.is_some() {
        return Err(syntax(line, format!("duplicate `{key}:` header")));
    }
    *slot = Some((line, v));
    Ok(())
}

fn parse_rule(line: usize, body: &str) -> Result<Rule, TuringError> {
    let tokens: Vec<&str> = body.split_whitespace().collect();
    if tokens.len() != 6 || tokens[2] != "->" {
        return Err(syntax(
            line,
            "expected `state symbol -> symbol move state`",
        ));
    }
    let movement = match tokens[4] {
        "L" => Move::Left,
        "R" => Move::Right,
        other => return Err(syntax(line, format!("move must be L or R, got `{other}`"))),
    };
    for &t in &[tokens[0], tokens[1], tokens[3], tokens[5]] {
        check_name(line, t)?;
    }
    Ok(Rule {
        line,
        state: tokens[0].to_owned(),
        read: tokens[1].to_owned(),
        write: tokens[3].to_owned(),
        movement,
        next: tokens[5].to_owned(),
    })
}

/// Parse a machine description.
///
/// ```text
/// # comments run to end of line
/// states: q0 q1 halt
/// alphabet: _ 1
/// blank: _
/// initial: q0
/// halting: halt
/// q0 _ -> 1 R q1
/// q0 1 -> 1 R q1
/// q1 _ -> _ L halt
/// q1 1 -> _ L halt
/// ```
///
/// `initial:` and `halting:` are required. `blank:` defaults to `_`; when
/// `states:` or `alphabet:` is omitted the set is collected from the other
/// lines. The table must be total on every non-halting state.
pub fn parse_tm(text: &str) -> Result<TuringMachine, TuringError> {
    let mut headers = Headers::default();
    let mut rules = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some((key, value)) = body.split_once(':') {
            match key.trim() {
                "states" => set_once(&mut headers.states, line, "states", name_list(line, value)?)?,
                "alphabet" => {
                    set_once(&mut headers.alphabet, line, "alphabet", name_list(line, value)?)?
                }
                "blank" => set_once(&mut headers.blank, line, "blank", single_name(line, value)?)?,
                "initial" => {
                    set_once(&mut headers.initial, line, "initial", single_name(line, value)?)?
                }
                "halting" => {
                    set_once(&mut headers.halting, line, "halting", single_name(line, value)?)?
                }
                other => return Err(syntax(line, format!("unknown header `{other}`"))),
            }
        } else {
            rules.push(parse_rule(line, body)?);
        }
    }

    let (initial_line, initial) = headers.initial.ok_or(TuringError::MissingHeader("initial"))?;
    let (halting_line, halting) = headers.halting.ok_or(TuringError::MissingHeader("halting"))?;
    let (blank_line, blank) = headers.blank.unwrap_or((0, "_".to_owned()));

    let states: BTreeSet<String> = match headers.states {
        Some((_, v)) => v.into_iter().collect(),
        None => rules
            .iter()
            .flat_map(|r| [r.state.clone(), r.next.clone()])
            .chain([initial.clone(), halting.clone()])
            .collect(),
    };
    let symbols: BTreeSet<String> = match headers.alphabet {
        Some((_, v)) => v.into_iter().collect(),
        None => rules
            .iter()
            .flat_map(|r| [r.read.clone(), r.write.clone()])
            .chain([blank.clone()])
            .collect(),
    };
    let states: Vec<String> = states.into_iter().collect();
    let symbols: Vec<String> = symbols.into_iter().collect();

    let state_id = |line: usize, name: &str| {
        states
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| TuringError::UnknownState {
                line,
                name: name.to_owned(),
            })
    };
    let symbol_id = |line: usize, name: &str| {
        symbols
            .binary_search_by(|s| s.as_str().cmp(name))
            .map_err(|_| TuringError::UnknownSymbol {
                line,
                name: name.to_owned(),
            })
    };

    let initial = state_id(initial_line, &initial)?;
    let halting = state_id(halting_line, &halting)?;
    let blank = symbol_id(blank_line, &blank)?;

    let n_sym = symbols.len();
    let mut table: Vec<Option<Transition>> = vec![None; states.len() * n_sym];
    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for r in &rules {
        let q = state_id(r.line, &r.state)?;
        let s = symbol_id(r.line, &r.read)?;
        let write = symbol_id(r.line, &r.write)?;
        let next = state_id(r.line, &r.next)?;
        if q == halting {
            return Err(TuringError::TransitionFromHalting {
                line: r.line,
                state: r.state.clone(),
            });
        }
        if seen.insert((q, s), r.line).is_some() {
            return Err(TuringError::DuplicateTransition {
                line: r.line,
                state: r.state.clone(),
                symbol: r.read.clone(),
            });
        }
        table[q * n_sym + s] = Some(Transition {
            write,
            movement: r.movement,
            next,
        });
    }

    for (q, state) in states.iter().enumerate() {
        if q == halting {
            continue;
        }
        for (s, symbol) in symbols.iter().enumerate() {
            if table[q * n_sym + s].is_none() {
                return Err(TuringError::MissingTransition {
                    state: state.clone(),
                    symbol: symbol.clone(),
                });
            }
        }
    }

    Ok(TuringMachine {
        states,
        symbols,
        blank,
        initial,
        halting,
        table,
    })
}
