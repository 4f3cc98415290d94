//! The subtype relation, mutual subtyping, and the least upper bound used
//! to type conditionals.
//!
//! `<:` is the reflexive-transitive closure of the declared hierarchy
//! extended to intersections: `τ <: T1&…&Tn` iff `τ <: Ti` for every `i`,
//! and `T1&…&Tn <: σ` (σ atomic) iff some `Ti <: σ`. `boolean` relates
//! only to itself. The decomposition terminates because each step either
//! shrinks an intersection or moves along the finite acyclic hierarchy;
//! nominal reachability is precomputed on the table.

use crate::syntax::{Name, PreType};
use crate::table::{ClassTable, LookupError};
use thiserror::Error;

/// Decide `a <: b`.
pub fn subtype(ct: &ClassTable, a: &PreType, b: &PreType) -> Result<bool, LookupError> {
    match (a, b) {
        (PreType::Boolean, PreType::Boolean) => Ok(true),
        (PreType::Boolean, _) | (_, PreType::Boolean) => {
            // Validate the reference side anyway so unknown names surface.
            let refside = if a.is_boolean() { b } else { a };
            validate_atoms(ct, refside)?;
            Ok(false)
        }
        (PreType::Ref(left), PreType::Ref(right)) => {
            validate_atoms(ct, a)?;
            validate_atoms(ct, b)?;
            // [<:&R]: everything on the right must be reached.
            for r in right {
                // [<:&L]: some atom on the left reaches it.
                let mut hit = false;
                for l in left {
                    if atom_subtype(ct, l, r)? {
                        hit = true;
                        break;
                    }
                }
                if !hit {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// `a ~ b`: mutual subtyping. No canonical forms are ever computed;
/// `I` and `Object & I` stay distinct as syntax.
pub fn equiv(ct: &ClassTable, a: &PreType, b: &PreType) -> Result<bool, LookupError> {
    Ok(subtype(ct, a, b)? && subtype(ct, b, a)?)
}

fn validate_atoms(ct: &ClassTable, t: &PreType) -> Result<(), LookupError> {
    if let Some(atoms) = t.atoms() {
        for a in atoms {
            if !ct.is_declared(a) {
                return Err(LookupError::UnknownName(a.clone()));
            }
        }
    }
    Ok(())
}

fn atom_subtype(ct: &ClassTable, a: &Name, b: &Name) -> Result<bool, LookupError> {
    if a == b || b.is_object() {
        return Ok(true);
    }
    Ok(ct.ancestors(a)?.contains(b))
}

/// The class component of a reference type: its sole class, the leftmost
/// class of the intersection, or `Object` when the type is built from
/// interfaces only.
pub fn class_component(ct: &ClassTable, t: &PreType) -> Result<Name, LookupError> {
    let atoms = t.atoms().ok_or(LookupError::Boolean)?;
    for (i, a) in atoms.iter().enumerate() {
        if ct.is_class(a) {
            if i != 0 {
                return Err(LookupError::MalformedIntersection {
                    ty: t.clone(),
                    detail: format!("class `{a}` may only appear leftmost"),
                });
            }
            return Ok(a.clone());
        }
        if !ct.is_declared(a) {
            return Err(LookupError::UnknownName(a.clone()));
        }
    }
    Ok(Name::object())
}

#[derive(Clone, Debug, Error)]
pub enum LubError {
    #[error("no common type for `boolean` and `{0}`")]
    BooleanMismatch(PreType),
    #[error(transparent)]
    Lookup(#[from] LookupError),
}

/// The least upper bound of two types: the minimal common superclass of
/// their class components intersected with the pairwise-incomparable
/// minimal common super-interfaces, the latter in table declaration
/// order. When interfaces are present and the minimal common superclass
/// is `Object`, the class component is omitted, so `lub(I, B) = I` for a
/// class `B` implementing `I`. `boolean` only joins with itself.
pub fn lub(ct: &ClassTable, a: &PreType, b: &PreType) -> Result<PreType, LubError> {
    match (a.is_boolean(), b.is_boolean()) {
        (true, true) => return Ok(PreType::Boolean),
        (true, false) => return Err(LubError::BooleanMismatch(b.clone())),
        (false, true) => return Err(LubError::BooleanMismatch(a.clone())),
        (false, false) => {}
    }

    // Minimal common superclass, unique by single inheritance.
    let ca = class_component(ct, a)?;
    let cb = class_component(ct, b)?;
    let chain_a = ct.superclass_chain(&ca)?;
    let chain_b = ct.superclass_chain(&cb)?;
    let least_class = chain_a
        .iter()
        .find(|c| chain_b.contains(c))
        .expect("superclass chains meet at Object")
        .clone();

    // Minimal common super-interfaces, in declaration order.
    let mut common: Vec<Name> = Vec::new();
    for i in ct.interface_names() {
        let target = PreType::nominal(i.clone());
        if subtype(ct, a, &target)? && subtype(ct, b, &target)? {
            common.push(i.clone());
        }
    }
    let minimal: Vec<Name> = common
        .iter()
        .filter(|i| {
            !common
                .iter()
                .any(|j| j != *i && ct.ancestors(j).map_or(false, |anc| anc.contains(i)))
        })
        .cloned()
        .collect();

    if minimal.is_empty() {
        Ok(PreType::nominal(least_class))
    } else if least_class.is_object() {
        Ok(PreType::Ref(minimal))
    } else {
        let mut atoms = vec![least_class];
        atoms.extend(minimal);
        Ok(PreType::Ref(atoms))
    }
}
