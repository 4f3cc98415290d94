//! The class table and its lookup functions.
//!
//! A `ClassTable` is immutable once built. Construction validates the
//! pieces the rest of the crate relies on unconditionally: names are
//! unique and resolvable, `extends`/`implements` respect the
//! class/interface split, and the inheritance graph is acyclic. Everything
//! else (constructor shape, header unions, method bodies) is the job of
//! [`ClassTable::ok`], which reports violations instead of failing.
//!
//! Header lookups come in three flavours: `mh` collects every method
//! header a type offers, `a_mh` the abstract ones and `d_mh` the ones
//! carrying default bodies. Their unions are partial: the same method
//! name with two different signatures, an abstract/default overlap, or
//! two unrelated interfaces both defaulting the same name all make the
//! result undefined (`None`). Undefined headers are exactly what makes a
//! pre-type fail to be a type.
//!
//! Per-atom results are precomputed at construction; full pre-type
//! queries are memoised behind `RwLock`ed maps, so lookups are cheap and
//! safe under concurrent readers. The `*_uncached` twins recompute from
//! the declarations and exist so tests can confirm the caches never
//! change an answer.

use crate::syntax::{
    ClassDecl, Decl, InterfaceDecl, MethodDecl, MethodHeader, MethodSig, Name, PreType,
    SourceProgram, Term,
};
use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::RwLock;
use thiserror::Error;

/// A set of method headers with at most one header per method name,
/// ordered by name.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HeaderSet {
    headers: BTreeMap<Name, MethodHeader>,
}

/// Why a header union `⊎` came out undefined.
#[derive(Clone, Debug)]
pub struct MhUndefined {
    pub method: Name,
    pub reason: String,
}

impl HeaderSet {
    pub fn empty() -> HeaderSet {
        HeaderSet::default()
    }

    pub fn from_headers<I: IntoIterator<Item = MethodHeader>>(
        headers: I,
    ) -> Result<HeaderSet, MhUndefined> {
        let mut set = HeaderSet::empty();
        for h in headers {
            set.insert(h)?;
        }
        Ok(set)
    }

    fn insert(&mut self, h: MethodHeader) -> Result<(), MhUndefined> {
        match self.headers.get(&h.name) {
            None => {
                self.headers.insert(h.name.clone(), h);
                Ok(())
            }
            Some(existing) if existing == &h => Ok(()),
            Some(existing) => Err(MhUndefined {
                method: h.name.clone(),
                reason: format!("`{existing}` clashes with `{h}`"),
            }),
        }
    }

    /// The union `⊎`: defined only when shared method names carry the
    /// same header (up to parameter names). Keeps the left occurrence.
    pub fn union(&self, other: &HeaderSet) -> Result<HeaderSet, MhUndefined> {
        let mut out = self.clone();
        for h in other.headers.values() {
            out.insert(h.clone())?;
        }
        Ok(out)
    }

    pub fn get(&self, m: &Name) -> Option<&MethodHeader> {
        self.headers.get(m)
    }

    pub fn contains(&self, h: &MethodHeader) -> bool {
        self.get(&h.name).is_some_and(|own| own == h)
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> {
        self.headers.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = &MethodHeader> {
        self.headers.values()
    }

    pub fn len(&self) -> usize {
        self.headers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.headers.is_empty()
    }

    /// A method name present in both sets, if any.
    pub fn shared_name(&self, other: &HeaderSet) -> Option<&Name> {
        self.headers.keys().find(|n| other.headers.contains_key(*n))
    }

    /// `self ⊆ other` under header equality.
    pub fn subset_of(&self, other: &HeaderSet) -> bool {
        self.iter().all(|h| other.contains(h))
    }
}

impl fmt::Display for HeaderSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, h) in self.headers.values().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{h}")?;
        }
        f.write_str("}")
    }
}

/// Errors raised while building a table.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("duplicate declaration of `{0}`")]
    Duplicate(Name),
    #[error("`{0}` is built in and cannot be declared")]
    Reserved(Name),
    #[error("class `{class}` extends unknown class `{superclass}`")]
    UnknownSuperclass { class: Name, superclass: Name },
    #[error("`{decl}` mentions unknown interface `{name}`")]
    UnknownInterface { decl: Name, name: Name },
    #[error("class `{class}` extends `{superclass}`, which is not a class")]
    SuperclassNotAClass { class: Name, superclass: Name },
    #[error("`{decl}` lists `{name}`, which is not an interface")]
    NotAnInterface { decl: Name, name: Name },
    #[error("inheritance cycle through `{0}`")]
    Cycle(Name),
}

/// Errors raised by lookups on a valid table.
#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum LookupError {
    #[error("unknown nominal type `{0}`")]
    UnknownName(Name),
    #[error("`{0}` is not a class")]
    NotAClass(Name),
    #[error("malformed intersection `{ty}`: {detail}")]
    MalformedIntersection { ty: PreType, detail: String },
    #[error("`boolean` is not a reference type")]
    Boolean,
}

/// `mbody` failures. Ambiguity (no unique minimal provider among the
/// interfaces that implement the method) is distinct from `None`.
#[derive(Clone, Debug, Error)]
pub enum MbodyError {
    #[error(transparent)]
    Lookup(#[from] LookupError),
    #[error("ambiguous default implementations of `{method}` in {candidates:?}")]
    Ambiguous { method: Name, candidates: Vec<Name> },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum AtomKind {
    Class,
    Interface,
}

struct AtomInfo {
    kind: AtomKind,
    /// Proper nominal supertypes (transitive, without the atom itself).
    ancestors: HashSet<Name>,
    mh: Result<HeaderSet, MhUndefined>,
    a_mh: Result<HeaderSet, MhUndefined>,
    d_mh: Result<HeaderSet, MhUndefined>,
    fields: Vec<(PreType, Name)>,
}

type MhResult = Result<Option<HeaderSet>, LookupError>;
type MbodyResult = Result<Option<(Vec<Name>, Term)>, MbodyError>;

/// The immutable class table: a mapping from nominal names to their
/// declarations, plus precomputed lookup data. `Object` is implicitly
/// present with no fields and no methods.
pub struct ClassTable {
    decls: Vec<Decl>,
    index: HashMap<Name, usize>,
    atoms: HashMap<Name, AtomInfo>,
    mh_cache: RwLock<HashMap<PreType, MhResult>>,
    a_mh_cache: RwLock<HashMap<PreType, MhResult>>,
    d_mh_cache: RwLock<HashMap<PreType, MhResult>>,
    mbody_cache: RwLock<HashMap<(Name, PreType), MbodyResult>>,
}

enum Split<'a> {
    Boolean,
    Parts { class: Option<&'a Name>, interfaces: Vec<&'a Name> },
}

impl ClassTable {
    pub fn new(decls: Vec<Decl>) -> Result<ClassTable, TableError> {
        let mut index = HashMap::new();
        for (i, d) in decls.iter().enumerate() {
            let name = d.name();
            if name.is_object() || name.as_str() == "boolean" {
                return Err(TableError::Reserved(name.clone()));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(TableError::Duplicate(name.clone()));
            }
        }

        // Hierarchy references resolve and respect the class/interface split.
        for d in &decls {
            match d {
                Decl::Class(c) => {
                    if !c.superclass.is_object() {
                        match index.get(&c.superclass).map(|&i| &decls[i]) {
                            Some(Decl::Class(_)) => {}
                            Some(Decl::Interface(_)) => {
                                return Err(TableError::SuperclassNotAClass {
                                    class: c.name.clone(),
                                    superclass: c.superclass.clone(),
                                })
                            }
                            None => {
                                return Err(TableError::UnknownSuperclass {
                                    class: c.name.clone(),
                                    superclass: c.superclass.clone(),
                                })
                            }
                        }
                    }
                    for i in &c.interfaces {
                        check_interface_ref(&decls, &index, &c.name, i)?;
                    }
                }
                Decl::Interface(it) => {
                    for i in &it.extends {
                        check_interface_ref(&decls, &index, &it.name, i)?;
                    }
                }
            }
        }

        // Acyclicity of extends ∪ implements.
        {
            let mut state: HashMap<&Name, u8> = HashMap::new(); // 1 = visiting, 2 = done
            fn visit<'a>(
                name: &'a Name,
                decls: &'a [Decl],
                index: &HashMap<Name, usize>,
                state: &mut HashMap<&'a Name, u8>,
            ) -> Result<(), TableError> {
                if name.is_object() {
                    return Ok(());
                }
                match state.get(name) {
                    Some(1) => return Err(TableError::Cycle(name.clone())),
                    Some(2) => return Ok(()),
                    _ => {}
                }
                state.insert(name, 1);
                let parents: Vec<&Name> = match &decls[index[name]] {
                    Decl::Class(c) => {
                        std::iter::once(&c.superclass).chain(c.interfaces.iter()).collect()
                    }
                    Decl::Interface(i) => i.extends.iter().collect(),
                };
                for p in parents {
                    visit(p, decls, index, state)?;
                }
                state.insert(name, 2);
                Ok(())
            }
            for d in &decls {
                visit(d.name(), &decls, &index, &mut state)?;
            }
        }

        let mut table = ClassTable {
            decls,
            index,
            atoms: HashMap::new(),
            mh_cache: RwLock::new(HashMap::new()),
            a_mh_cache: RwLock::new(HashMap::new()),
            d_mh_cache: RwLock::new(HashMap::new()),
            mbody_cache: RwLock::new(HashMap::new()),
        };
        table.precompute();
        Ok(table)
    }

    pub fn from_program(program: &SourceProgram) -> Result<ClassTable, TableError> {
        ClassTable::new(program.decls.clone())
    }

    fn precompute(&mut self) {
        let mut atoms: HashMap<Name, AtomInfo> = HashMap::new();
        atoms.insert(
            Name::object(),
            AtomInfo {
                kind: AtomKind::Class,
                ancestors: HashSet::new(),
                mh: Ok(HeaderSet::empty()),
                a_mh: Ok(HeaderSet::empty()),
                d_mh: Ok(HeaderSet::empty()),
                fields: Vec::new(),
            },
        );
        let names: Vec<Name> = self.decls.iter().map(|d| d.name().clone()).collect();
        for n in &names {
            self.build_atom(n, &mut atoms);
        }
        self.atoms = atoms;
    }

    fn build_atom(&self, name: &Name, atoms: &mut HashMap<Name, AtomInfo>) {
        if atoms.contains_key(name) {
            return;
        }
        match &self.decls[self.index[name]] {
            Decl::Class(c) => {
                self.build_atom_parents(&c.superclass, &c.interfaces, atoms);
                let mut ancestors: HashSet<Name> = HashSet::new();
                ancestors.insert(Name::object());
                ancestors.insert(c.superclass.clone());
                ancestors.extend(atoms[&c.superclass].ancestors.iter().cloned());
                for i in &c.interfaces {
                    ancestors.insert(i.clone());
                    ancestors.extend(atoms[i].ancestors.iter().cloned());
                }
                let own = HeaderSet::from_headers(c.methods.iter().map(|m| m.header.clone()));
                let mh = own.and_then(|own| {
                    let sup = atoms[&c.superclass].mh.clone()?;
                    let ifaces = mh_of_list(&c.interfaces, atoms)?;
                    own.union(&sup)?.union(&ifaces)
                });
                let mut fields = atoms[&c.superclass].fields.clone();
                fields.extend(c.fields.iter().cloned());
                atoms.insert(
                    name.clone(),
                    AtomInfo {
                        kind: AtomKind::Class,
                        ancestors,
                        mh,
                        a_mh: Ok(HeaderSet::empty()),
                        d_mh: Ok(HeaderSet::empty()),
                        fields,
                    },
                );
            }
            Decl::Interface(it) => {
                self.build_atom_parents(&Name::object(), &it.extends, atoms);
                let mut ancestors: HashSet<Name> = HashSet::new();
                ancestors.insert(Name::object());
                for i in &it.extends {
                    ancestors.insert(i.clone());
                    ancestors.extend(atoms[i].ancestors.iter().cloned());
                }
                let a_mh = HeaderSet::from_headers(it.headers.iter().cloned())
                    .and_then(|own| own.union(&a_mh_of_list_owned(&it.extends, atoms)?));
                let d_mh = HeaderSet::from_headers(it.defaults.iter().map(|m| m.header.clone()))
                    .and_then(|own| own.union(&d_mh_of_list_owned(&it.extends, atoms)?));
                let mh = join_a_and_d(&a_mh, &d_mh);
                atoms.insert(
                    name.clone(),
                    AtomInfo { kind: AtomKind::Interface, ancestors, mh, a_mh, d_mh, fields: Vec::new() },
                );
            }
        }
    }

    fn build_atom_parents(
        &self,
        superclass: &Name,
        interfaces: &[Name],
        atoms: &mut HashMap<Name, AtomInfo>,
    ) {
        if !superclass.is_object() {
            self.build_atom(superclass, atoms);
        }
        for i in interfaces {
            self.build_atom(i, atoms);
        }
    }

    // ---- basic access ----------------------------------------------------

    pub fn decls(&self) -> &[Decl] {
        &self.decls
    }

    pub fn get(&self, name: &Name) -> Option<&Decl> {
        self.index.get(name).map(|&i| &self.decls[i])
    }

    pub fn class(&self, name: &Name) -> Option<&ClassDecl> {
        match self.get(name) {
            Some(Decl::Class(c)) => Some(c),
            _ => None,
        }
    }

    pub fn interface(&self, name: &Name) -> Option<&InterfaceDecl> {
        match self.get(name) {
            Some(Decl::Interface(i)) => Some(i),
            _ => None,
        }
    }

    pub fn is_declared(&self, name: &Name) -> bool {
        name.is_object() || self.index.contains_key(name)
    }

    pub fn is_class(&self, name: &Name) -> bool {
        self.atom(name).map(|a| a.kind == AtomKind::Class).unwrap_or(false)
    }

    pub fn is_interface_name(&self, name: &Name) -> bool {
        self.atom(name).map(|a| a.kind == AtomKind::Interface).unwrap_or(false)
    }

    /// Declared class names in declaration order (without `Object`).
    pub fn class_names(&self) -> impl Iterator<Item = &Name> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Class(c) => Some(&c.name),
            _ => None,
        })
    }

    /// Declared interface names in declaration order.
    pub fn interface_names(&self) -> impl Iterator<Item = &Name> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Interface(i) => Some(&i.name),
            _ => None,
        })
    }

    fn atom(&self, name: &Name) -> Result<&AtomInfo, LookupError> {
        self.atoms.get(name).ok_or_else(|| LookupError::UnknownName(name.clone()))
    }

    /// Proper nominal supertypes of a declared atom.
    pub(crate) fn ancestors(&self, name: &Name) -> Result<&HashSet<Name>, LookupError> {
        self.atom(name).map(|a| &a.ancestors)
    }

    /// `c`, its superclass, and so on up to `Object`.
    pub fn superclass_chain(&self, c: &Name) -> Result<Vec<Name>, LookupError> {
        match self.atom(c)?.kind {
            AtomKind::Class => {}
            AtomKind::Interface => return Err(LookupError::NotAClass(c.clone())),
        }
        let mut chain = vec![c.clone()];
        let mut cur = c.clone();
        while !cur.is_object() {
            let Some(Decl::Class(cd)) = self.get(&cur) else { break };
            chain.push(cd.superclass.clone());
            cur = cd.superclass.clone();
        }
        Ok(chain)
    }

    /// Validate the shape of a reference pre-type against this table: all
    /// atoms declared, no duplicates, at most one class and only in the
    /// leftmost position.
    fn split<'a>(&self, t: &'a PreType) -> Result<Split<'a>, LookupError> {
        let atoms = match t.atoms() {
            None => return Ok(Split::Boolean),
            Some(atoms) => atoms,
        };
        let mut class = None;
        let mut interfaces = Vec::new();
        let mut seen: HashSet<&Name> = HashSet::new();
        for (i, a) in atoms.iter().enumerate() {
            if !seen.insert(a) {
                return Err(LookupError::MalformedIntersection {
                    ty: t.clone(),
                    detail: format!("duplicate atom `{a}`"),
                });
            }
            match self.atom(a)?.kind {
                AtomKind::Class if i == 0 => class = Some(a),
                AtomKind::Class => {
                    return Err(LookupError::MalformedIntersection {
                        ty: t.clone(),
                        detail: format!("class `{a}` may only appear leftmost"),
                    })
                }
                AtomKind::Interface => interfaces.push(a),
            }
        }
        Ok(Split::Parts { class, interfaces })
    }

    // ---- header lookups ---------------------------------------------------

    /// `mh(τ)`: every method header of the pre-type, or `None` when some
    /// union `⊎` along the way is undefined. `mh(boolean)` is undefined
    /// by construction.
    pub fn mh(&self, t: &PreType) -> MhResult {
        if let Some(hit) = self.mh_cache.read().unwrap().get(t) {
            return hit.clone();
        }
        let computed = self.mh_compute(t);
        self.mh_cache.write().unwrap().insert(t.clone(), computed.clone());
        computed
    }

    fn mh_compute(&self, t: &PreType) -> MhResult {
        Ok(self.mh_detailed(t)?.ok())
    }

    /// Like [`ClassTable::mh`] but keeps the reason a union was undefined.
    fn mh_detailed(&self, t: &PreType) -> Result<Result<HeaderSet, MhUndefined>, LookupError> {
        match self.split(t)? {
            Split::Boolean => Ok(Err(MhUndefined {
                method: Name::new("boolean"),
                reason: "the function mh is undefined for boolean".into(),
            })),
            Split::Parts { class, interfaces } => {
                let iface_part = self.mh_of_interface_list(&interfaces);
                Ok(match class {
                    None => iface_part,
                    Some(c) => match (&self.atoms[c].mh, iface_part) {
                        (Ok(cls), Ok(ifaces)) => cls.union(&ifaces),
                        (Err(e), _) => Err(e.clone()),
                        (_, Err(e)) => Err(e),
                    },
                })
            }
        }
    }

    fn mh_of_interface_list(&self, interfaces: &[&Name]) -> Result<HeaderSet, MhUndefined> {
        let a = self.a_mh_of_interface_list(interfaces)?;
        let d = self.d_mh_of_interface_list(interfaces)?;
        if let Some(m) = a.shared_name(&d) {
            return Err(MhUndefined {
                method: m.clone(),
                reason: format!("`{m}` is both abstract and default"),
            });
        }
        a.union(&d)
    }

    fn a_mh_of_interface_list(&self, interfaces: &[&Name]) -> Result<HeaderSet, MhUndefined> {
        let mut out = HeaderSet::empty();
        for i in interfaces {
            out = out.union(self.atoms[*i].a_mh.as_ref().map_err(Clone::clone)?)?;
        }
        Ok(out)
    }

    fn d_mh_of_interface_list(&self, interfaces: &[&Name]) -> Result<HeaderSet, MhUndefined> {
        check_default_diamond(interfaces, |n| &self.atoms[n])?;
        let mut out = HeaderSet::empty();
        for i in interfaces {
            out = out.union(self.atoms[*i].d_mh.as_ref().map_err(Clone::clone)?)?;
        }
        Ok(out)
    }

    /// `A-mh(τ)`: abstract headers of the interface part. The class
    /// component, if any, is skipped.
    pub fn a_mh(&self, t: &PreType) -> MhResult {
        if let Some(hit) = self.a_mh_cache.read().unwrap().get(t) {
            return hit.clone();
        }
        let computed = match self.split(t) {
            Err(e) => Err(e),
            Ok(Split::Boolean) => Ok(None),
            Ok(Split::Parts { interfaces, .. }) => {
                Ok(self.a_mh_of_interface_list(&interfaces).ok())
            }
        };
        self.a_mh_cache.write().unwrap().insert(t.clone(), computed.clone());
        computed
    }

    /// `D-mh(τ)`: default headers of the interface part, subject to the
    /// comparability side condition between the listed interfaces.
    pub fn d_mh(&self, t: &PreType) -> MhResult {
        if let Some(hit) = self.d_mh_cache.read().unwrap().get(t) {
            return hit.clone();
        }
        let computed = match self.split(t) {
            Err(e) => Err(e),
            Ok(Split::Boolean) => Ok(None),
            Ok(Split::Parts { interfaces, .. }) => {
                Ok(self.d_mh_of_interface_list(&interfaces).ok())
            }
        };
        self.d_mh_cache.write().unwrap().insert(t.clone(), computed.clone());
        computed
    }

    /// A pre-type is a type when `mh` is defined; `boolean` is a type in
    /// its own right.
    pub fn is_type(&self, t: &PreType) -> Result<bool, LookupError> {
        if t.is_boolean() {
            return Ok(true);
        }
        Ok(self.mh(t)?.is_some())
    }

    /// A functional type is an interface or intersection of interfaces
    /// whose abstract-header set is a singleton; the result is that single
    /// header. Types with a class component are never functional.
    pub fn is_functional(&self, t: &PreType) -> Result<Option<MethodHeader>, LookupError> {
        match self.split(t)? {
            Split::Boolean => Ok(None),
            Split::Parts { class: Some(_), .. } => Ok(None),
            Split::Parts { class: None, .. } => {
                if !self.is_type(t)? {
                    return Ok(None);
                }
                match self.a_mh(t)? {
                    Some(a) if a.len() == 1 => Ok(a.iter().next().cloned()),
                    _ => Ok(None),
                }
            }
        }
    }

    // ---- fields and method lookups -----------------------------------------

    /// `fields(C)`: superclass fields first, own fields appended, in
    /// constructor-argument order. `fields(Object)` is empty.
    pub fn fields(&self, c: &Name) -> Result<&[(PreType, Name)], LookupError> {
        let atom = self.atom(c)?;
        match atom.kind {
            AtomKind::Class => Ok(&atom.fields),
            AtomKind::Interface => Err(LookupError::NotAClass(c.clone())),
        }
    }

    /// `mtype(m, τ)`: the signature of `m` in `mh(τ)`.
    pub fn mtype(&self, m: &Name, t: &PreType) -> Result<Option<MethodSig>, LookupError> {
        Ok(self.mh(t)?.and_then(|hs| hs.get(m).map(MethodHeader::sig)))
    }

    /// `A-mtype(m, τ)` over the abstract headers.
    pub fn a_mtype(&self, m: &Name, t: &PreType) -> Result<Option<MethodSig>, LookupError> {
        Ok(self.a_mh(t)?.and_then(|hs| hs.get(m).map(MethodHeader::sig)))
    }

    /// `D-mtype(m, τ)` over the default headers.
    pub fn d_mtype(&self, m: &Name, t: &PreType) -> Result<Option<MethodSig>, LookupError> {
        Ok(self.d_mh(t)?.and_then(|hs| hs.get(m).map(MethodHeader::sig)))
    }

    /// `mbody(m, τ)`: parameter names and body of the implementation of
    /// `m`. Classes search their own methods, then the superclass chain,
    /// then their interfaces; interface lists pick the implementation of
    /// the unique smallest provider, and a missing unique minimum is an
    /// [`MbodyError::Ambiguous`] rather than `None`.
    pub fn mbody(&self, m: &Name, t: &PreType) -> MbodyResult {
        let key = (m.clone(), t.clone());
        if let Some(hit) = self.mbody_cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        let computed = self.mbody_compute(m, t);
        self.mbody_cache.write().unwrap().insert(key, computed.clone());
        computed
    }

    fn mbody_compute(&self, m: &Name, t: &PreType) -> MbodyResult {
        match self.split(t)? {
            Split::Boolean => Ok(None),
            Split::Parts { class, interfaces } => {
                if let Some(c) = class {
                    if let Some(found) = self.mbody_in_class(m, c)? {
                        return Ok(Some(found));
                    }
                }
                self.mbody_in_interface_list(m, &interfaces)
            }
        }
    }

    fn mbody_in_class(&self, m: &Name, c: &Name) -> MbodyResult {
        if c.is_object() {
            return Ok(None);
        }
        let Some(Decl::Class(cd)) = self.get(c) else {
            return Err(LookupError::UnknownName(c.clone()).into());
        };
        if let Some(found) = own_method(&cd.methods, m) {
            return Ok(Some(found));
        }
        if let Some(found) = self.mbody_in_class(m, &cd.superclass)? {
            return Ok(Some(found));
        }
        self.mbody_in_interface_list(m, &cd.interfaces.iter().collect::<Vec<_>>())
    }

    fn mbody_in_interface(&self, m: &Name, i: &Name) -> MbodyResult {
        let Some(Decl::Interface(id)) = self.get(i) else {
            return Err(LookupError::UnknownName(i.clone()).into());
        };
        if let Some(found) = own_method(&id.defaults, m) {
            return Ok(Some(found));
        }
        self.mbody_in_interface_list(m, &id.extends.iter().collect::<Vec<_>>())
    }

    fn mbody_in_interface_list(&self, m: &Name, interfaces: &[&Name]) -> MbodyResult {
        let mut providers: Vec<(&Name, (Vec<Name>, Term))> = Vec::new();
        for i in interfaces {
            if let Some(found) = self.mbody_in_interface(m, i)? {
                providers.push((i, found));
            }
        }
        if providers.is_empty() {
            return Ok(None);
        }
        let minimal = providers.iter().position(|(i, _)| {
            providers
                .iter()
                .all(|(j, _)| i == j || self.ancestors(i).map_or(false, |anc| anc.contains(j)))
        });
        match minimal {
            Some(ix) => Ok(Some(providers.swap_remove(ix).1)),
            None => Err(MbodyError::Ambiguous {
                method: m.clone(),
                candidates: providers.iter().map(|(i, _)| (*i).clone()).collect(),
            }),
        }
    }

    // ---- uncached twins ----------------------------------------------------
    //
    // Recomputed from the declarations on every call; the property tests
    // compare them against the cached versions.

    pub fn fields_uncached(&self, c: &Name) -> Result<Vec<(PreType, Name)>, LookupError> {
        if c.is_object() {
            return Ok(Vec::new());
        }
        match self.get(c) {
            Some(Decl::Class(cd)) => {
                let mut out = self.fields_uncached(&cd.superclass)?;
                out.extend(cd.fields.iter().cloned());
                Ok(out)
            }
            Some(Decl::Interface(_)) => Err(LookupError::NotAClass(c.clone())),
            None => Err(LookupError::UnknownName(c.clone())),
        }
    }

    pub fn mh_uncached(&self, t: &PreType) -> MhResult {
        match self.split(t)? {
            Split::Boolean => Ok(None),
            Split::Parts { class, interfaces } => {
                let ifaces = self.mh_list_uncached(&interfaces);
                let combined = match class {
                    None => ifaces,
                    Some(c) => self.mh_atom_uncached(c).and_then(|cls| cls.union(&ifaces?)),
                };
                Ok(combined.ok())
            }
        }
    }

    fn mh_atom_uncached(&self, n: &Name) -> Result<HeaderSet, MhUndefined> {
        if n.is_object() {
            return Ok(HeaderSet::empty());
        }
        match self.get(n).expect("atom resolved by split") {
            Decl::Class(c) => {
                let own = HeaderSet::from_headers(c.methods.iter().map(|m| m.header.clone()))?;
                let sup = self.mh_atom_uncached(&c.superclass)?;
                let ifaces = self.mh_list_uncached(&c.interfaces.iter().collect::<Vec<_>>())?;
                own.union(&sup)?.union(&ifaces)
            }
            Decl::Interface(_) => self.mh_list_uncached(&[n]),
        }
    }

    fn mh_list_uncached(&self, interfaces: &[&Name]) -> Result<HeaderSet, MhUndefined> {
        let a = self.a_mh_list_uncached(interfaces)?;
        let d = self.d_mh_list_uncached(interfaces)?;
        if let Some(m) = a.shared_name(&d) {
            return Err(MhUndefined {
                method: m.clone(),
                reason: format!("`{m}` is both abstract and default"),
            });
        }
        a.union(&d)
    }

    pub fn a_mh_uncached(&self, t: &PreType) -> MhResult {
        match self.split(t)? {
            Split::Boolean => Ok(None),
            Split::Parts { interfaces, .. } => Ok(self.a_mh_list_uncached(&interfaces).ok()),
        }
    }

    pub fn d_mh_uncached(&self, t: &PreType) -> MhResult {
        match self.split(t)? {
            Split::Boolean => Ok(None),
            Split::Parts { interfaces, .. } => Ok(self.d_mh_list_uncached(&interfaces).ok()),
        }
    }

    fn a_mh_list_uncached(&self, interfaces: &[&Name]) -> Result<HeaderSet, MhUndefined> {
        let mut out = HeaderSet::empty();
        for i in interfaces {
            let id = self.interface(i).expect("atom resolved by split");
            let own = HeaderSet::from_headers(id.headers.iter().cloned())?;
            let inherited = self.a_mh_list_uncached(&id.extends.iter().collect::<Vec<_>>())?;
            out = out.union(&own.union(&inherited)?)?;
        }
        Ok(out)
    }

    fn d_mh_list_uncached(&self, interfaces: &[&Name]) -> Result<HeaderSet, MhUndefined> {
        check_default_diamond(interfaces, |n| &self.atoms[n])?;
        let mut out = HeaderSet::empty();
        for i in interfaces {
            let id = self.interface(i).expect("atom resolved by split");
            let own = HeaderSet::from_headers(id.defaults.iter().map(|m| m.header.clone()))?;
            let inherited = self.d_mh_list_uncached(&id.extends.iter().collect::<Vec<_>>())?;
            out = out.union(&own.union(&inherited)?)?;
        }
        Ok(out)
    }

    pub fn mbody_uncached(&self, m: &Name, t: &PreType) -> MbodyResult {
        self.mbody_compute(m, t)
    }
}

fn check_interface_ref(
    decls: &[Decl],
    index: &HashMap<Name, usize>,
    decl: &Name,
    name: &Name,
) -> Result<(), TableError> {
    match index.get(name).map(|&i| &decls[i]) {
        Some(Decl::Interface(_)) => Ok(()),
        Some(Decl::Class(_)) => {
            Err(TableError::NotAnInterface { decl: decl.clone(), name: name.clone() })
        }
        None if name.is_object() => {
            Err(TableError::NotAnInterface { decl: decl.clone(), name: name.clone() })
        }
        None => Err(TableError::UnknownInterface { decl: decl.clone(), name: name.clone() }),
    }
}

/// The comparability side condition on `D-mh` over a list: two listed
/// interfaces may share a default method name only if one is a subtype of
/// the other.
fn check_default_diamond<'a>(
    interfaces: &[&'a Name],
    atom: impl Fn(&Name) -> &'a AtomInfo,
) -> Result<(), MhUndefined> {
    for (ix, i) in interfaces.iter().enumerate() {
        for j in &interfaces[ix + 1..] {
            let (di, dj) = (&atom(i).d_mh, &atom(j).d_mh);
            let (Ok(di), Ok(dj)) = (di, dj) else { continue };
            if let Some(m) = di.shared_name(dj) {
                let related = atom(i).ancestors.contains(j) || atom(j).ancestors.contains(i);
                if !related {
                    return Err(MhUndefined {
                        method: m.clone(),
                        reason: format!(
                            "unrelated interfaces `{i}` and `{j}` both provide a default `{m}`"
                        ),
                    });
                }
            }
        }
    }
    Ok(())
}

fn mh_of_list(
    interfaces: &[Name],
    atoms: &HashMap<Name, AtomInfo>,
) -> Result<HeaderSet, MhUndefined> {
    let refs: Vec<&Name> = interfaces.iter().collect();
    let a = a_mh_of_list(&refs, atoms)?;
    let d = d_mh_of_list(&refs, atoms)?;
    if let Some(m) = a.shared_name(&d) {
        return Err(MhUndefined {
            method: m.clone(),
            reason: format!("`{m}` is both abstract and default"),
        });
    }
    a.union(&d)
}

fn a_mh_of_list(
    interfaces: &[&Name],
    atoms: &HashMap<Name, AtomInfo>,
) -> Result<HeaderSet, MhUndefined> {
    let mut out = HeaderSet::empty();
    for i in interfaces {
        out = out.union(atoms[*i].a_mh.as_ref().map_err(Clone::clone)?)?;
    }
    Ok(out)
}

fn d_mh_of_list(
    interfaces: &[&Name],
    atoms: &HashMap<Name, AtomInfo>,
) -> Result<HeaderSet, MhUndefined> {
    check_default_diamond(interfaces, |n| &atoms[n])?;
    let mut out = HeaderSet::empty();
    for i in interfaces {
        out = out.union(atoms[*i].d_mh.as_ref().map_err(Clone::clone)?)?;
    }
    Ok(out)
}

fn a_mh_of_list_owned(
    interfaces: &[Name],
    atoms: &HashMap<Name, AtomInfo>,
) -> Result<HeaderSet, MhUndefined> {
    a_mh_of_list(&interfaces.iter().collect::<Vec<_>>(), atoms)
}

fn d_mh_of_list_owned(
    interfaces: &[Name],
    atoms: &HashMap<Name, AtomInfo>,
) -> Result<HeaderSet, MhUndefined> {
    d_mh_of_list(&interfaces.iter().collect::<Vec<_>>(), atoms)
}

fn join_a_and_d(
    a: &Result<HeaderSet, MhUndefined>,
    d: &Result<HeaderSet, MhUndefined>,
) -> Result<HeaderSet, MhUndefined> {
    let (a, d) = (a.as_ref().map_err(Clone::clone)?, d.as_ref().map_err(Clone::clone)?);
    if let Some(m) = a.shared_name(d) {
        return Err(MhUndefined {
            method: m.clone(),
            reason: format!("`{m}` is both abstract and default"),
        });
    }
    a.union(d)
}

fn own_method(methods: &[MethodDecl], m: &Name) -> Option<(Vec<Name>, Term)> {
    methods
        .iter()
        .find(|decl| &decl.header.name == m)
        .map(|decl| (decl.header.param_names(), decl.body.clone()))
}
