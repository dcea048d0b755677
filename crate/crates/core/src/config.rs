use std::path::PathBuf;

/// Knobs shared by every stage of the pipeline.
#[derive(Clone, Debug)]
pub struct VerifierConfig {
    /// Maximum number of times a loop back-edge is followed (and the
    /// maximum inlining depth of a recursive call chain).
    pub unwind: u32,
    /// When set, exhausting the bound is reported as a violated claim;
    /// otherwise the path is silently cut.
    pub unwinding_assertions: bool,
    /// Directories searched, in order, for `#include <Name>`.
    pub include_paths: Vec<PathBuf>,
    /// Capacity of the backing array of container models.
    pub container_capacity: u32,
    /// Bit width of `int`.
    pub int_width: u32,
    /// `QTimer` rejects a zero interval as well as negative ones.
    pub strict_positive_interval: bool,
    pub timeout_seconds: u64,
    pub mem_limit_kb: u64,
    /// Symbolic execution substitutes constants and copies into later
    /// expressions instead of referring to the SSA variable.
    pub constant_propagation: bool,
}

impl Default for VerifierConfig {
    fn default() -> Self {
        VerifierConfig {
            unwind: 10,
            unwinding_assertions: true,
            include_paths: Vec::new(),
            container_capacity: 10,
            int_width: 32,
            strict_positive_interval: false,
            timeout_seconds: 600,
            mem_limit_kb: 14_000_000,
            constant_propagation: true,
        }
    }
}

impl VerifierConfig {
    pub fn with_include(mut self, dir: impl Into<PathBuf>) -> Self {
        self.include_paths.push(dir.into());
        self
    }

    pub fn with_unwind(mut self, k: u32) -> Self {
        self.unwind = k;
        self
    }

    pub fn with_int_width(mut self, width: u32) -> Self {
        self.int_width = width;
        self
    }

    pub fn with_unwinding_assertions(mut self, on: bool) -> Self {
        self.unwinding_assertions = on;
        self
    }

    pub fn with_container_capacity(mut self, capacity: u32) -> Self {
        self.container_capacity = capacity;
        self
    }

    pub fn with_constant_propagation(mut self, on: bool) -> Self {
        self.constant_propagation = on;
        self
    }

    /// Checks the numeric invariants. Returns a description of the first
    /// violated one.
    pub fn validate(&self) -> Result<(), String> {
        if self.unwind < 1 {
            return Err("unwind bound must be at least 1".into());
        }
        if self.container_capacity < 1 {
            return Err("container capacity must be at least 1".into());
        }
        if !(2..=64).contains(&self.int_width) {
            return Err(format!("int width {} is outside 2..=64", self.int_width));
        }
        if self.timeout_seconds < 1 {
            return Err("timeout must be at least one second".into());
        }
        if self.mem_limit_kb < 1 {
            return Err("memory limit must be positive".into());
        }
        Ok(())
    }
}
