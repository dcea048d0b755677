use std::collections::BTreeMap;
use std::fmt;

use super::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    MissingEntry,
    MissingTerminator,
    MisplacedTerminator,
    DanglingTarget,
    EmptyAssertMessage,
    UnknownCallee,
    MalformedLoop,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub function: String,
    pub index: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}@{}: {}", self.function, i, self.message),
            None => write!(f, "{}: {}", self.function, self.message),
        }
    }
}

/// Checks the structural invariants of a GOTO program. An empty result
/// means the program is well formed.
pub fn validate_goto(p: &GotoProgram) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if !p.functions.contains_key(&p.entry) {
        out.push(Diagnostic {
            kind: DiagnosticKind::MissingEntry,
            function: p.entry.clone(),
            index: None,
            message: format!("entry function `{}` does not exist", p.entry),
        });
    }
    for f in p.functions.values() {
        let mut diag = |kind, index, message: String| {
            out.push(Diagnostic {
                kind,
                function: f.name.clone(),
                index,
                message,
            })
        };
        let n = f.body.len();
        if !matches!(f.body.last().map(|i| &i.kind), Some(InstrKind::EndFunction)) {
            diag(
                DiagnosticKind::MissingTerminator,
                None,
                "function does not end with END_FUNCTION".into(),
            );
        }
        // (exits, back-edges) per loop id
        let mut loops: BTreeMap<u32, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
        for (i, ins) in f.body.iter().enumerate() {
            match &ins.kind {
                InstrKind::EndFunction if i + 1 != n => diag(
                    DiagnosticKind::MisplacedTerminator,
                    Some(i),
                    "END_FUNCTION before the end of the function".into(),
                ),
                InstrKind::Goto {
                    target, loop_tag, ..
                } => {
                    if *target >= n {
                        diag(
                            DiagnosticKind::DanglingTarget,
                            Some(i),
                            format!("GOTO target {target} outside 0..{n}"),
                        );
                    }
                    if let Some(tag) = loop_tag {
                        let entry = loops.entry(tag.loop_id).or_default();
                        match tag.role {
                            LoopRole::Exit => entry.0.push(i),
                            LoopRole::BackEdge => {
                                entry.1.push(i);
                                if *target > i {
                                    diag(
                                        DiagnosticKind::MalformedLoop,
                                        Some(i),
                                        "back-edge jumps forward".into(),
                                    );
                                }
                            }
                        }
                    }
                }
                InstrKind::Assert { message, .. } if message.is_empty() => diag(
                    DiagnosticKind::EmptyAssertMessage,
                    Some(i),
                    "assertion without a message".into(),
                ),
                InstrKind::Call { callee, .. } if !p.functions.contains_key(callee) => diag(
                    DiagnosticKind::UnknownCallee,
                    Some(i),
                    format!("call to unknown function `{callee}`"),
                ),
                _ => {}
            }
        }
        for (id, (exits, backs)) in loops {
            if exits.len() != 1 || backs.len() != 1 {
                diag(
                    DiagnosticKind::MalformedLoop,
                    None,
                    format!(
                        "loop {id} has {} exit tests and {} back-edges",
                        exits.len(),
                        backs.len()
                    ),
                );
                continue;
            }
            let (exit, back) = (exits[0], backs[0]);
            let head = match &f.body[back].kind {
                InstrKind::Goto { target, .. } => *target,
                _ => unreachable!(),
            };
            if !(head <= exit && exit < back) {
                diag(
                    DiagnosticKind::MalformedLoop,
                    Some(exit),
                    format!("loop {id} exit test is not between its head and back-edge"),
                );
            }
        }
    }
    out
}
