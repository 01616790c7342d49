use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::term::{Term, TermError, Triple};

/// Dictionary-encoded term identifier, local to one [`Graph`].
pub type TermId = u32;

/// A triple of dictionary ids in subject, predicate, object order.
pub type IdTriple = [TermId; 3];

/// Which positional index a lookup goes through.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    Spo,
    Pos,
    Osp,
}

impl IndexKind {
    // Position of subject/predicate/object inside a key of this index.
    fn key_order(self) -> [usize; 3] {
        match self {
            IndexKind::Spo => [0, 1, 2],
            IndexKind::Pos => [1, 2, 0],
            IndexKind::Osp => [2, 0, 1],
        }
    }

    fn key_of(self, t: IdTriple) -> IdTriple {
        let order = self.key_order();
        [t[order[0]], t[order[1]], t[order[2]]]
    }

    fn triple_of(self, k: IdTriple) -> IdTriple {
        match self {
            IndexKind::Spo => k,
            IndexKind::Pos => [k[2], k[0], k[1]],
            IndexKind::Osp => [k[1], k[2], k[0]],
        }
    }
}

/// Three sorted positional indexes over id triples.
#[derive(Debug, Clone, Default)]
pub struct TripleIndex {
    spo: BTreeSet<IdTriple>,
    pos: BTreeSet<IdTriple>,
    osp: BTreeSet<IdTriple>,
}

impl TripleIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, t: IdTriple) -> bool {
        if !self.spo.insert(t) {
            return false;
        }
        self.pos.insert(IndexKind::Pos.key_of(t));
        self.osp.insert(IndexKind::Osp.key_of(t));
        true
    }

    pub fn contains(&self, t: &IdTriple) -> bool {
        self.spo.contains(t)
    }

    pub fn len(&self) -> usize {
        self.spo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spo.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = IdTriple> + '_ {
        self.spo.iter().copied()
    }

    fn set(&self, kind: IndexKind) -> &BTreeSet<IdTriple> {
        match kind {
            IndexKind::Spo => &self.spo,
            IndexKind::Pos => &self.pos,
            IndexKind::Osp => &self.osp,
        }
    }

    /// Picks the index whose key prefix covers the most bound positions.
    pub fn best_index(s: Option<TermId>, p: Option<TermId>, o: Option<TermId>) -> IndexKind {
        match (s, p, o) {
            (Some(_), Some(_), _) => IndexKind::Spo,
            (Some(_), None, Some(_)) => IndexKind::Osp,
            (Some(_), None, None) => IndexKind::Spo,
            (None, Some(_), _) => IndexKind::Pos,
            (None, None, Some(_)) => IndexKind::Osp,
            (None, None, None) => IndexKind::Spo,
        }
    }

    pub fn matches(
        &self,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> impl Iterator<Item = IdTriple> + '_ {
        self.matches_via(Self::best_index(s, p, o), s, p, o)
    }

    /// Pattern lookup forced through one index. Bound positions that form a
    /// key prefix of `kind` narrow the range scan; the rest are filtered.
    pub fn matches_via(
        &self,
        kind: IndexKind,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> impl Iterator<Item = IdTriple> + '_ {
        let bound = [s, p, o];
        let order = kind.key_order();
        let mut lo = [0; 3];
        let mut hi = [TermId::MAX; 3];
        for (slot, &position) in order.iter().enumerate() {
            match bound[position] {
                Some(id) => {
                    lo[slot] = id;
                    hi[slot] = id;
                }
                None => break,
            }
        }
        self.set(kind)
            .range(lo..=hi)
            .map(move |k| kind.triple_of(*k))
            .filter(move |t| {
                bound
                    .iter()
                    .zip(t.iter())
                    .all(|(b, v)| b.is_none_or(|b| b == *v))
            })
    }

    pub fn count(&self, s: Option<TermId>, p: Option<TermId>, o: Option<TermId>) -> usize {
        self.matches(s, p, o).count()
    }
}

/// Interns terms to dense ids.
#[derive(Debug, Clone, Default)]
pub struct Dictionary {
    terms: Vec<Term>,
    ids: HashMap<Term, TermId>,
}

impl Dictionary {
    pub fn intern(&mut self, term: &Term) -> TermId {
        if let Some(&id) = self.ids.get(term) {
            return id;
        }
        let id = TermId::try_from(self.terms.len()).expect("term dictionary overflow");
        self.terms.push(term.clone());
        self.ids.insert(term.clone(), id);
        id
    }

    pub fn id_of(&self, term: &Term) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    pub fn term(&self, id: TermId) -> &Term {
        &self.terms[id as usize]
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// In-memory RDF graph with set semantics and SPO/POS/OSP indexes.
///
/// Mutation needs `&mut self`; shared references can be read from several
/// threads at once.
#[derive(Debug, Clone, Default)]
pub struct Graph {
    dict: Dictionary,
    index: TripleIndex,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a triple, returning `true` if it was not already present.
    pub fn insert(&mut self, triple: &Triple) -> Result<bool, TermError> {
        triple.validate()?;
        let t = [
            self.dict.intern(&triple.subject),
            self.dict.intern(&triple.predicate),
            self.dict.intern(&triple.object),
        ];
        Ok(self.index.insert(t))
    }

    /// Convenience for building triples from parts.
    pub fn add(&mut self, s: &Term, p: &Term, o: &Term) -> Result<bool, TermError> {
        if s.is_literal() {
            return Err(TermError::LiteralSubject(s.clone()));
        }
        if !p.is_iri() {
            return Err(TermError::NonIriPredicate(p.clone()));
        }
        let t = [self.dict.intern(s), self.dict.intern(p), self.dict.intern(o)];
        Ok(self.index.insert(t))
    }

    /// Inserts an id triple. The ids must come from this graph's dictionary
    /// and already satisfy the triple shape rules.
    pub fn insert_ids(&mut self, t: IdTriple) -> bool {
        debug_assert!((t[2] as usize) < self.dict.len());
        self.index.insert(t)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        match (
            self.dict.id_of(&triple.subject),
            self.dict.id_of(&triple.predicate),
            self.dict.id_of(&triple.object),
        ) {
            (Some(s), Some(p), Some(o)) => self.index.contains(&[s, p, o]),
            _ => false,
        }
    }

    pub fn contains_ids(&self, t: &IdTriple) -> bool {
        self.index.contains(t)
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn intern(&mut self, term: &Term) -> TermId {
        self.dict.intern(term)
    }

    pub fn id_of(&self, term: &Term) -> Option<TermId> {
        self.dict.id_of(term)
    }

    pub fn term(&self, id: TermId) -> &Term {
        self.dict.term(id)
    }

    /// Number of interned terms; ids run from 0 to this value.
    pub fn term_count(&self) -> usize {
        self.dict.len()
    }

    pub fn index(&self) -> &TripleIndex {
        &self.index
    }

    fn resolve(&self, t: IdTriple) -> Triple {
        Triple {
            subject: self.term(t[0]).clone(),
            predicate: self.term(t[1]).clone(),
            object: self.term(t[2]).clone(),
        }
    }

    /// Triples agreeing with every bound position; `None` is a wildcard.
    pub fn matches(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> Vec<Triple> {
        self.matches_via(None, s, p, o)
    }

    /// Like [`Graph::matches`] but optionally forcing a particular index.
    pub fn matches_via(
        &self,
        kind: Option<IndexKind>,
        s: Option<&Term>,
        p: Option<&Term>,
        o: Option<&Term>,
    ) -> Vec<Triple> {
        let lookup = |t: Option<&Term>| match t {
            None => Some(None),
            Some(term) => self.dict.id_of(term).map(Some),
        };
        let (Some(s), Some(p), Some(o)) = (lookup(s), lookup(p), lookup(o)) else {
            return Vec::new();
        };
        let kind = kind.unwrap_or_else(|| TripleIndex::best_index(s, p, o));
        self.index
            .matches_via(kind, s, p, o)
            .map(|t| self.resolve(t))
            .collect()
    }

    pub fn match_ids(
        &self,
        s: Option<TermId>,
        p: Option<TermId>,
        o: Option<TermId>,
    ) -> impl Iterator<Item = IdTriple> + '_ {
        self.index.matches(s, p, o)
    }

    pub fn count(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> usize {
        let lookup = |t: Option<&Term>| match t {
            None => Some(None),
            Some(term) => self.dict.id_of(term).map(Some),
        };
        match (lookup(s), lookup(p), lookup(o)) {
            (Some(s), Some(p), Some(o)) => self.index.count(s, p, o),
            _ => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.index.iter().map(|t| self.resolve(t))
    }

    pub fn iter_ids(&self) -> impl Iterator<Item = IdTriple> + '_ {
        self.index.iter()
    }

    /// Adds every triple of `other` to `self`.
    pub fn extend_from(&mut self, other: &Graph) {
        let mut map: Vec<Option<TermId>> = vec![None; other.dict.len()];
        for t in other.index.iter() {
            let mut ids = [0; 3];
            for (slot, &id) in t.iter().enumerate() {
                ids[slot] = *map[id as usize].get_or_insert_with(|| self.dict.intern(other.term(id)));
            }
            self.index.insert(ids);
        }
    }

    /// Set of triples as a sorted vector, independent of dictionary layout.
    pub fn to_sorted_vec(&self) -> Vec<Triple> {
        let mut v: Vec<Triple> = self.iter().collect();
        v.sort();
        v
    }

    /// Triples present in `self` but absent from `other`.
    pub fn difference(&self, other: &Graph) -> Vec<Triple> {
        self.iter().filter(|t| !other.contains(t)).collect()
    }

    pub fn is_subset_of(&self, other: &Graph) -> bool {
        self.len() <= other.len() && self.iter().all(|t| other.contains(&t))
    }
}

/// Set equality of the triples; dictionaries may differ.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.iter().all(|t| other.contains(&t))
    }
}

impl Eq for Graph {}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        for t in iter {
            g.insert(&t).expect("triple shape");
        }
        g
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in self.to_sorted_vec() {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}
