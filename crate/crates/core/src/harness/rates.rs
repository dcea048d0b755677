//! Outcome categories of a benchmark suite and their percentages.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    /// The verdict matches the expectation.
    Successful,
    /// A correct program was reported as violating a property.
    FalseIncorrect,
    /// A violating program was reported as correct.
    FalseCorrect,
    /// A violation was found, but not the expected one.
    WrongProperty,
    /// The tool crashed or rejected its input.
    Failed,
    Timeout,
    MemOut,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Successful,
        Category::FalseIncorrect,
        Category::FalseCorrect,
        Category::WrongProperty,
        Category::Failed,
        Category::Timeout,
        Category::MemOut,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Category::Successful => "successful",
            Category::FalseIncorrect => "false incorrect",
            Category::FalseCorrect => "false correct",
            Category::WrongProperty => "wrong property",
            Category::Failed => "failed",
            Category::Timeout => "timeout",
            Category::MemOut => "memout",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub successful: u64,
    pub false_incorrect: u64,
    pub false_correct: u64,
    pub wrong_property: u64,
    pub failed: u64,
    pub timeout: u64,
    pub memout: u64,
}

impl Counts {
    pub fn get(&self, c: Category) -> u64 {
        match c {
            Category::Successful => self.successful,
            Category::FalseIncorrect => self.false_incorrect,
            Category::FalseCorrect => self.false_correct,
            Category::WrongProperty => self.wrong_property,
            Category::Failed => self.failed,
            Category::Timeout => self.timeout,
            Category::MemOut => self.memout,
        }
    }

    pub fn add(&mut self, c: Category) {
        let slot = match c {
            Category::Successful => &mut self.successful,
            Category::FalseIncorrect => &mut self.false_incorrect,
            Category::FalseCorrect => &mut self.false_correct,
            Category::WrongProperty => &mut self.wrong_property,
            Category::Failed => &mut self.failed,
            Category::Timeout => &mut self.timeout,
            Category::MemOut => &mut self.memout,
        };
        *slot += 1;
    }

    pub fn total(&self) -> u64 {
        Category::ALL.iter().map(|c| self.get(*c)).sum()
    }
}

/// A percentage with two decimals, stored in hundredths of a percent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Rate(pub u64);

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}%", self.0 / 100, self.0 % 100)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rates {
    pub successful: Rate,
    pub false_incorrect: Rate,
    pub false_correct: Rate,
    pub wrong_property: Rate,
    pub failed: Rate,
    pub timeout: Rate,
    pub memout: Rate,
}

impl Rates {
    pub fn get(&self, c: Category) -> Rate {
        match c {
            Category::Successful => self.successful,
            Category::FalseIncorrect => self.false_incorrect,
            Category::FalseCorrect => self.false_correct,
            Category::WrongProperty => self.wrong_property,
            Category::Failed => self.failed,
            Category::Timeout => self.timeout,
            Category::MemOut => self.memout,
        }
    }
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum RateError {
    #[error("cannot compute rates over zero cases")]
    ZeroTotal,
}

/// `100 × count / total` rounded half-up to two decimals, in exact integer
/// arithmetic.
pub fn rate(count: u64, total: u64) -> Result<Rate, RateError> {
    if total == 0 {
        return Err(RateError::ZeroTotal);
    }
    Ok(Rate((20_000 * count + total) / (2 * total)))
}

pub fn compute_rates(counts: &Counts) -> Result<Rates, RateError> {
    let total = counts.total();
    let r = |c| rate(counts.get(c), total);
    Ok(Rates {
        successful: r(Category::Successful)?,
        false_incorrect: r(Category::FalseIncorrect)?,
        false_correct: r(Category::FalseCorrect)?,
        wrong_property: r(Category::WrongProperty)?,
        failed: r(Category::Failed)?,
        timeout: r(Category::Timeout)?,
        memout: r(Category::MemOut)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(rate(1, 54).unwrap().to_string(), "1.85%");
        assert_eq!(rate(2, 54).unwrap().to_string(), "3.70%");
        assert_eq!(rate(51, 54).unwrap().to_string(), "94.44%");
        assert_eq!(rate(0, 7).unwrap().to_string(), "0.00%");
        assert_eq!(rate(1, 8).unwrap().to_string(), "12.50%");
        assert_eq!(rate(1, 3).unwrap().to_string(), "33.33%");
        assert_eq!(rate(2, 3).unwrap().to_string(), "66.67%");
        assert_eq!(rate(1, 0), Err(RateError::ZeroTotal));
    }
}
