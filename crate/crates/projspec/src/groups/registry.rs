//! Representation builders behind a common trait, registered by kind name and
//! selected at runtime from a group specification file.

use super::{
    cyclic_cayley, dihedral_cayley, gl3_reps, koopman_truncation, regular_rep, CayleyTable,
    GroupError, GroupRep,
};
use crate::io::GroupSpec;

pub trait RepBuilder: Send + Sync {
    /// Kind name used in group specification files.
    fn kind(&self) -> &'static str;
    fn build(&self, spec: &GroupSpec) -> Result<GroupRep, GroupError>;
}

struct Dihedral;

impl RepBuilder for Dihedral {
    fn kind(&self) -> &'static str {
        "dihedral"
    }
    fn build(&self, spec: &GroupSpec) -> Result<GroupRep, GroupError> {
        let n = spec.n.ok_or(GroupError::MissingField("n"))? as usize;
        let table = dihedral_cayley(n)?;
        Ok(regular_rep(
            &table,
            spec.labels
                .clone()
                .or(Some(vec!["a".into(), "t".into()])),
        ))
    }
}

struct Cyclic;

impl RepBuilder for Cyclic {
    fn kind(&self) -> &'static str {
        "cyclic"
    }
    fn build(&self, spec: &GroupSpec) -> Result<GroupRep, GroupError> {
        let n = spec.n.ok_or(GroupError::MissingField("n"))? as usize;
        let table = cyclic_cayley(n)?;
        Ok(regular_rep(&table, spec.labels.clone()))
    }
}

struct KoopmanDinfty;

impl RepBuilder for KoopmanDinfty {
    fn kind(&self) -> &'static str {
        "koopman-dinfty"
    }
    fn build(&self, spec: &GroupSpec) -> Result<GroupRep, GroupError> {
        let level = spec.level.ok_or(GroupError::MissingField("level"))?;
        koopman_truncation(level)
    }
}

struct Gl3Z3;

impl RepBuilder for Gl3Z3 {
    fn kind(&self) -> &'static str {
        "gl3z3"
    }
    fn build(&self, spec: &GroupSpec) -> Result<GroupRep, GroupError> {
        let (plus, minus) = gl3_reps();
        match spec.sign.as_deref() {
            None | Some("plus") | Some("+") => Ok(plus),
            Some("minus") | Some("-") => Ok(minus),
            Some(other) => Err(GroupError::UnknownKind(format!("gl3z3 sign '{other}'"))),
        }
    }
}

struct CustomCayley;

impl RepBuilder for CustomCayley {
    fn kind(&self) -> &'static str {
        "custom-cayley"
    }
    fn build(&self, spec: &GroupSpec) -> Result<GroupRep, GroupError> {
        let file = spec
            .cayley
            .as_ref()
            .ok_or(GroupError::MissingField("cayley"))?;
        if file.table.len() != file.order {
            return Err(GroupError::InvalidTable(format!(
                "declared order {} but table has {} rows",
                file.order,
                file.table.len()
            )));
        }
        let table = CayleyTable::new(file.table.clone(), file.generators.clone(), file.identity)?;
        Ok(regular_rep(&table, spec.labels.clone()))
    }
}

/// All built-in representation builders.
pub fn builders() -> Vec<Box<dyn RepBuilder>> {
    vec![
        Box::new(Dihedral),
        Box::new(Cyclic),
        Box::new(KoopmanDinfty),
        Box::new(Gl3Z3),
        Box::new(CustomCayley),
    ]
}

/// Build the representation a group spec asks for, dispatching on kind.
pub fn build_rep(spec: &GroupSpec) -> Result<GroupRep, GroupError> {
    for b in builders() {
        if b.kind() == spec.kind {
            return b.build(spec);
        }
    }
    Err(GroupError::UnknownKind(spec.kind.clone()))
}
