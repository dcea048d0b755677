//! Random `QList<int>` operation sequences checked against a `VecDeque`.

use std::collections::VecDeque;
use std::fmt::Write;

use miniqt_bmc::goto::ARRAY_BOUNDS_MESSAGE;
use miniqt_bmc::opmodel::{EMPTY_LIST_MESSAGE, INDEX_MESSAGE};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub enum ListOp {
    PushBack(i64),
    PushFront(i64),
    PopFront,
    PopBack,
    Front,
    Back,
    At(i64),
    Size,
    Clear,
}

pub fn random_ops(rng: &mut ChaCha8Rng, len: usize, safe_bias: bool) -> Vec<ListOp> {
    (0..len)
        .map(|_| {
            let v = rng.gen_range(-50..50);
            let roll = rng.gen_range(0..if safe_bias { 12 } else { 10 });
            match roll {
                0 | 10 => ListOp::PushBack(v),
                1 | 11 => ListOp::PushFront(v),
                2 => ListOp::PopFront,
                3 => ListOp::PopBack,
                4 => ListOp::Front,
                5 => ListOp::Back,
                6 => ListOp::At(rng.gen_range(-1..5)),
                7 => ListOp::Size,
                8 => ListOp::Clear,
                _ => ListOp::PushBack(v),
            }
        })
        .collect()
}

/// What the reference model says the checker must report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Safe,
    Violation(&'static str),
}

/// Simulates the ops on a deque bounded by `capacity`; the first misuse
/// determines the expected message.
pub fn expected(ops: &[ListOp], capacity: usize) -> Expected {
    let mut q: VecDeque<i64> = VecDeque::new();
    for op in ops {
        match *op {
            ListOp::PushBack(v) | ListOp::PushFront(v) => {
                if q.len() == capacity {
                    return Expected::Violation(ARRAY_BOUNDS_MESSAGE);
                }
                if matches!(op, ListOp::PushBack(_)) {
                    q.push_back(v)
                } else {
                    q.push_front(v)
                }
            }
            ListOp::PopFront | ListOp::PopBack | ListOp::Front | ListOp::Back => {
                if q.is_empty() {
                    return Expected::Violation(EMPTY_LIST_MESSAGE);
                }
                match op {
                    ListOp::PopFront => {
                        q.pop_front();
                    }
                    ListOp::PopBack => {
                        q.pop_back();
                    }
                    _ => {}
                }
            }
            ListOp::At(i) => {
                if i < 0 || i as usize >= q.len() {
                    return Expected::Violation(INDEX_MESSAGE);
                }
            }
            ListOp::Size => {}
            ListOp::Clear => q.clear(),
        }
    }
    Expected::Safe
}

/// A program performing `ops`, asserting every observed value against the
/// reference deque.
pub fn program(ops: &[ListOp], capacity: usize) -> String {
    let mut q: VecDeque<i64> = VecDeque::new();
    let mut src = String::from("#include <QList>\n\nint main() {\n    QList<int> l;\n");
    let mut valid = true;
    for op in ops {
        let line = match *op {
            ListOp::PushBack(v) => {
                q.push_back(v);
                format!("l.push_back({v});")
            }
            ListOp::PushFront(v) => {
                q.push_front(v);
                format!("l.push_front({v});")
            }
            ListOp::PopFront => {
                q.pop_front();
                "l.pop_front();".into()
            }
            ListOp::PopBack => {
                q.pop_back();
                "l.pop_back();".into()
            }
            ListOp::Front => match q.front() {
                Some(v) if valid => format!("assert(l.front() == {v});"),
                _ => "l.front();".into(),
            },
            ListOp::Back => match q.back() {
                Some(v) if valid => format!("assert(l.back() == {v});"),
                _ => "l.back();".into(),
            },
            ListOp::At(i) => match q.get(i.max(0) as usize) {
                Some(v) if valid && i >= 0 => format!("assert(l.at({i}) == {v});"),
                _ => format!("l.at({i});"),
            },
            ListOp::Size => format!("assert(l.size() == {});", q.len()),
            ListOp::Clear => {
                q.clear();
                "l.clear();".into()
            }
        };
        if q.len() > capacity {
            valid = false;
        }
        let _ = writeln!(src, "    {line}");
    }
    src.push_str("    return 0;\n}\n");
    src
}
