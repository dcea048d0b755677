use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::config::VerifierConfig;

use super::ast::{Item, Origin, Program};
use super::{lexer, parser, FrontendError};

/// Finds `name` (or `name.mqt`) in the search path. First match wins.
pub fn find_model(name: &str, search_path: &[PathBuf]) -> Option<PathBuf> {
    search_path.iter().find_map(|dir| {
        [dir.join(name), dir.join(format!("{name}.mqt"))]
            .into_iter()
            .find(|p| p.is_file())
    })
}

/// Loads and parses a model file, marking every declaration as model code.
pub fn load_model(name: &str, path: &Path) -> Result<Program, FrontendError> {
    let text = std::fs::read_to_string(path).map_err(|e| FrontendError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let tokens = lexer::tokenize(&text, &path.display().to_string())?;
    let mut program = parser::parse(&tokens)?;
    for item in &mut program.items {
        match item {
            Item::Class(c) => {
                c.origin = Origin::Model(name.to_string());
                for m in &mut c.methods {
                    m.origin = Origin::Model(name.to_string());
                }
            }
            Item::Function(f) => f.origin = Origin::Model(name.to_string()),
            Item::Include(_) => {}
        }
    }
    Ok(program)
}

/// Merges the declarations of every included model into `program`.
///
/// Model files may include other models; each model is loaded at most once,
/// and models already merged into `program` are not loaded again.
pub fn resolve_includes(
    program: Program,
    config: &VerifierConfig,
) -> Result<Program, FrontendError> {
    let mut loaded: HashSet<String> = program
        .items
        .iter()
        .filter_map(|i| match i {
            Item::Class(c) => match &c.origin {
                Origin::Model(n) => Some(n.clone()),
                Origin::User => None,
            },
            Item::Function(f) => match &f.origin {
                Origin::Model(n) => Some(n.clone()),
                Origin::User => None,
            },
            Item::Include(_) => None,
        })
        .collect();
    let mut prefix = Vec::new();
    for inc in program.includes() {
        load_recursive(&inc.name, config, &mut loaded, &mut prefix)?;
    }
    if prefix.is_empty() {
        return Ok(program);
    }
    prefix.extend(program.items);
    Ok(Program { items: prefix })
}

fn load_recursive(
    name: &str,
    config: &VerifierConfig,
    loaded: &mut HashSet<String>,
    out: &mut Vec<Item>,
) -> Result<(), FrontendError> {
    if !loaded.insert(name.to_string()) {
        return Ok(());
    }
    let path =
        find_model(name, &config.include_paths).ok_or_else(|| FrontendError::IncludeNotFound {
            name: name.to_string(),
            search_path: config.include_paths.clone(),
        })?;
    let model = load_model(name, &path)?;
    for dep in model.includes() {
        load_recursive(&dep.name, config, loaded, out)?;
    }
    out.extend(
        model
            .items
            .into_iter()
            .filter(|i| !matches!(i, Item::Include(_))),
    );
    Ok(())
}
