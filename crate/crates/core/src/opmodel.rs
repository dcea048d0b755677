//! The operational-model catalog and the checks that keep model files
//! honest: every model must parse and type-check on its own, and every
//! listed method must keep its precondition assertion verbatim.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::config::VerifierConfig;
use crate::frontend::ast::Program;
use crate::frontend::typed::{FunctionDef, TStmt};
use crate::frontend::{self, FrontendError, TypeckOptions};
use crate::goto::PropertyClass;
use crate::loc::SourceLocation;

/// A method that must contain a precondition with an exact message.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RequiredAssertion {
    /// Mangled name, e.g. `QList_int::front`.
    pub method: String,
    pub message: String,
    pub line: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelCatalog {
    /// Directory the model paths are relative to.
    pub root: PathBuf,
    /// Include name to model file.
    pub models: BTreeMap<String, PathBuf>,
    pub required: Vec<RequiredAssertion>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("{}: {message}", path.display())]
    Io { path: PathBuf, message: String },
    #[error("catalog line {line}: {message}")]
    Syntax { line: u32, message: String },
}

impl ModelCatalog {
    pub fn load(path: &Path) -> Result<Self, CatalogError> {
        let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &root)
    }

    /// Parses catalog text. Lines are `Name = file`, `require <method>
    /// "<message>"`, blank, or `#` comments.
    pub fn parse(text: &str, root: &Path) -> Result<Self, CatalogError> {
        let mut models = BTreeMap::new();
        let mut required = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i as u32 + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |message: &str| CatalogError::Syntax {
                line: line_no,
                message: message.to_string(),
            };
            if let Some(rest) = line.strip_prefix("require ") {
                let rest = rest.trim();
                let (method, msg) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| syntax("expected `require <method> \"<message>\"`"))?;
                let msg = msg.trim();
                let message = msg
                    .strip_prefix('"')
                    .and_then(|m| m.strip_suffix('"'))
                    .ok_or_else(|| syntax("assertion message must be double-quoted"))?;
                required.push(RequiredAssertion {
                    method: method.to_string(),
                    message: message.to_string(),
                    line: line_no,
                });
            } else if let Some((name, file)) = line.split_once('=') {
                let (name, file) = (name.trim(), file.trim());
                if name.is_empty() || file.is_empty() {
                    return Err(syntax("expected `Name = file`"));
                }
                models.insert(name.to_string(), root.join(file));
            } else {
                return Err(syntax("expected `Name = file` or `require ...`"));
            }
        }
        Ok(ModelCatalog {
            root: root.to_path_buf(),
            models,
            required,
        })
    }
}

/// Pre- and postconditions of one shipped model method, as documentation
/// of what the model source realizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelMethodContract {
    pub method: &'static str,
    /// `(condition, assertion message)` pairs checked at entry.
    pub preconditions: Vec<(&'static str, &'static str)>,
    /// State changes the body simulates.
    pub postconditions: Vec<&'static str>,
}

pub const EMPTY_LIST_MESSAGE: &str = "The list must not be empty";
pub const INDEX_MESSAGE: &str = "index out of range";
pub const NEGATIVE_INTERVAL_MESSAGE: &str = "time period must not be negative";
pub const NONPOSITIVE_INTERVAL_MESSAGE: &str = "time period must be positive";
pub const UNOPENED_FILE_MESSAGE: &str = "file must be open for reading";

/// Contracts of the models under `models/`.
pub fn shipped_contracts() -> Vec<ModelMethodContract> {
    let c =
        |method, pre: &[(&'static str, &'static str)], post: &[&'static str]| ModelMethodContract {
            method,
            preconditions: pre.to_vec(),
            postconditions: post.to_vec(),
        };
    let non_empty = [("!isEmpty()", EMPTY_LIST_MESSAGE)];
    let interval = [("msec >= 0", NEGATIVE_INTERVAL_MESSAGE)];
    vec![
        c("QList_int::QList", &[], &["_size == 0"]),
        c(
            "QList_int::push_front",
            &[],
            &[
                "_list[0] == x",
                "old elements shift up by one",
                "_size incremented",
            ],
        ),
        c(
            "QList_int::push_back",
            &[],
            &["_list[old _size] == x", "_size incremented"],
        ),
        c("QList_int::front", &non_empty, &["returns _list[0]"]),
        c("QList_int::back", &non_empty, &["returns _list[_size - 1]"]),
        c(
            "QList_int::pop_front",
            &non_empty,
            &["elements shift down by one", "_size decremented"],
        ),
        c("QList_int::pop_back", &non_empty, &["_size decremented"]),
        c(
            "QList_int::at",
            &[("0 <= i && i < _size", INDEX_MESSAGE)],
            &["returns _list[i]"],
        ),
        c("QList_int::size", &[], &["returns _size"]),
        c("QList_int::isEmpty", &[], &["returns _size == 0"]),
        c("QList_int::clear", &[], &["_size == 0"]),
        c("QTimer::setInterval", &interval, &["_interval == msec"]),
        c(
            "QTimer::start_1",
            &interval,
            &["_interval == msec", "_active"],
        ),
        c("QTimer::start_0", &[], &["_active"]),
        c("QTimer::interval", &[], &["returns _interval"]),
        c("QTimer::stop", &[], &["!_active"]),
        c("QTimer::isActive", &[], &["returns _active"]),
        c(
            "QFile::QFile",
            &[],
            &["_exists is nondeterministic", "!_open"],
        ),
        c("QFile::open", &[], &["_open == _exists", "returns _exists"]),
        c("QFile::read", &[("_open", UNOPENED_FILE_MESSAGE)], &[]),
        c("QFile::close", &[], &["!_open"]),
        c("QFile::exists", &[], &["returns _exists"]),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelDiagnosticKind {
    Io,
    Parse,
    Type,
    MissingRequiredAssertion,
}

impl fmt::Display for ModelDiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelDiagnosticKind::Io => "io",
            ModelDiagnosticKind::Parse => "parse",
            ModelDiagnosticKind::Type => "type",
            ModelDiagnosticKind::MissingRequiredAssertion => "missing-required-assertion",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelDiagnostic {
    pub kind: ModelDiagnosticKind,
    /// Include name of the model, or the method for missing assertions.
    pub subject: String,
    pub message: String,
    pub loc: Option<SourceLocation>,
}

impl fmt::Display for ModelDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.kind, self.subject, self.message)?;
        if let Some(loc) = &self.loc {
            write!(f, " ({loc})")?;
        }
        Ok(())
    }
}

fn diagnostic(model: &str, e: FrontendError) -> ModelDiagnostic {
    let kind = match &e {
        FrontendError::Lex { .. } | FrontendError::Parse { .. } => ModelDiagnosticKind::Parse,
        FrontendError::Io { .. } => ModelDiagnosticKind::Io,
        _ => ModelDiagnosticKind::Type,
    };
    ModelDiagnostic {
        kind,
        subject: model.to_string(),
        loc: e.loc().cloned(),
        message: e.to_string(),
    }
}

fn contains_assertion(body: &[TStmt], message: &str) -> bool {
    body.iter().any(|s| match s {
        TStmt::Assert {
            message: m, class, ..
        } => m == message && *class == PropertyClass::ModelPrecondition,
        TStmt::If {
            then_body,
            else_body,
            ..
        } => contains_assertion(then_body, message) || contains_assertion(else_body, message),
        TStmt::While { body, .. } | TStmt::Block(body) => contains_assertion(body, message),
        TStmt::For {
            init, step, body, ..
        } => {
            contains_assertion(init, message)
                || contains_assertion(step, message)
                || contains_assertion(body, message)
        }
        _ => false,
    })
}

/// Checks every model in the catalog. Returns no diagnostics iff each model
/// parses and type-checks stand-alone (with the models it includes) and
/// every required assertion is present with its exact message.
pub fn validate_models(catalog: &ModelCatalog, config: &VerifierConfig) -> Vec<ModelDiagnostic> {
    let mut config = config.clone();
    if !config.include_paths.contains(&catalog.root) {
        config.include_paths.push(catalog.root.clone());
    }
    let opts = TypeckOptions {
        require_main: false,
        instantiate_templates: true,
    };
    let mut diags = Vec::new();
    let mut functions: BTreeMap<String, FunctionDef> = BTreeMap::new();
    let mut broken: Vec<&str> = Vec::new();
    for (name, path) in &catalog.models {
        let checked = frontend::include::load_model(name, path)
            .and_then(|p: Program| frontend::resolve_includes(p, &config))
            .and_then(|p| frontend::typecheck_with(&p, &config, opts));
        match checked {
            Ok(ast) => {
                for f in ast.all_functions() {
                    functions.insert(f.name.clone(), f.clone());
                }
            }
            Err(e) => {
                broken.push(name);
                diags.push(diagnostic(name, e));
            }
        }
    }
    for req in &catalog.required {
        // Methods of a model that failed to load were already reported.
        if broken.iter().any(|m| req.method.starts_with(m)) {
            continue;
        }
        let found = functions
            .get(&req.method)
            .is_some_and(|f| contains_assertion(&f.body, &req.message));
        if !found {
            diags.push(ModelDiagnostic {
                kind: ModelDiagnosticKind::MissingRequiredAssertion,
                subject: req.method.clone(),
                message: format!("expected a precondition with message \"{}\"", req.message),
                loc: None,
            });
        }
    }
    diags
}
