//! Finite groups given by multiplication tables or permutation generators.
//!
//! Elements are dense ids `0..order` and id `0` is always the identity.
//! Groups of order at most [`TABLE_LIMIT`] keep a full multiplication
//! table; larger groups keep one permutation per element and multiply on
//! the fly.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::perm::Perm;

pub type Elem = u32;

/// Largest order for which a full multiplication table is stored.
pub const TABLE_LIMIT: usize = 512;

/// Hard bound on the closure of permutation generators.
pub const CLOSURE_LIMIT: usize = 1 << 20;

#[derive(Debug, Clone)]
enum Repr {
    Table(Vec<Elem>),
    Perms {
        elements: Vec<Perm>,
        index: HashMap<Perm, Elem>,
    },
}

/// Permutation generators a group was built from, with their element ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermGens {
    pub degree: usize,
    pub gens: Vec<Perm>,
    pub ids: Vec<Elem>,
}

/// Cayley-graph spanning tree for the chosen generating set.
#[derive(Debug, Clone)]
struct Generation {
    gens: Vec<Elem>,
    /// `parent[x] = (y, s)` with `x = y * gens[s]`; unused for the identity.
    parent: Vec<(Elem, u16)>,
    bfs_order: Vec<Elem>,
}

#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    repr: Repr,
    inverses: Vec<Elem>,
    perm_gens: Option<PermGens>,
    generation: OnceLock<Generation>,
}

impl FiniteGroup {
    /// Builds a group from a row-major table, checking every group axiom.
    pub fn from_table(name: &str, order: usize, mul: Vec<Elem>) -> Result<Self> {
        if order == 0 {
            return Err(Error::invalid_group(name, "order must be positive"));
        }
        if mul.len() != order * order {
            return Err(Error::invalid_group(
                name,
                format!(
                    "table has {} entries, expected {}",
                    mul.len(),
                    order * order
                ),
            ));
        }
        if let Some(&bad) = mul.iter().find(|&&x| x as usize >= order) {
            return Err(Error::invalid_group(
                name,
                format!("entry {bad} out of range"),
            ));
        }
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        for a in 0..order {
            if at(0, a) != a || at(a, 0) != a {
                return Err(Error::invalid_group(
                    name,
                    format!("0 is not a two-sided identity for element {a}"),
                ));
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(Error::invalid_group(
                            name,
                            format!("not associative on ({a}, {b}, {c})"),
                        ));
                    }
                }
            }
        }
        let mut inverses = vec![0; order];
        for a in 0..order {
            match (0..order).find(|&b| at(a, b) == 0 && at(b, a) == 0) {
                Some(b) => inverses[a] = b as Elem,
                None => {
                    return Err(Error::invalid_group(
                        name,
                        format!("element {a} has no two-sided inverse"),
                    ))
                }
            }
        }
        Ok(FiniteGroup {
            name: name.to_string(),
            order,
            repr: Repr::Table(mul),
            inverses,
            perm_gens: None,
            generation: OnceLock::new(),
        })
    }

    /// Closes a set of permutations under multiplication. Element ids follow
    /// breadth-first order from the identity, multiplying by the generators
    /// on the right in the order given.
    pub fn from_perm_gens(name: &str, degree: usize, gens: Vec<Perm>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::invalid_group(
                name,
                format!("generator {g} does not act on {degree} points"),
            ));
        }
        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0 as Elem)]);
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head].clone();
            head += 1;
            for g in &gens {
                let y = x.then(g);
                if !index.contains_key(&y) {
                    if elements.len() >= CLOSURE_LIMIT {
                        return Err(Error::CapExceeded {
                            what: "permutation group closure",
                            needed: elements.len() + 1,
                            cap: CLOSURE_LIMIT,
                        });
                    }
                    index.insert(y.clone(), elements.len() as Elem);
                    elements.push(y);
                }
            }
        }
        let ids = gens.iter().map(|g| index[g]).collect();
        let mut group = Self::from_perm_elements(name, elements, index);
        group.perm_gens = Some(PermGens { degree, gens, ids });
        Ok(group)
    }

    /// `elements[0]` must be the identity and the list must be closed.
    fn from_perm_elements(name: &str, elements: Vec<Perm>, index: HashMap<Perm, Elem>) -> Self {
        let order = elements.len();
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let repr = if order <= TABLE_LIMIT {
            let mut mul = Vec::with_capacity(order * order);
            for a in &elements {
                for b in &elements {
                    mul.push(index[&a.then(b)]);
                }
            }
            Repr::Table(mul)
        } else {
            Repr::Perms { elements, index }
        };
        FiniteGroup {
            name: name.to_string(),
            order,
            repr,
            inverses,
            perm_gens: None,
            generation: OnceLock::new(),
        }
    }

    /// Internal constructor for groups whose product is already known to be
    /// a group law on `0..order` with identity `0`.
    pub(crate) fn from_law(
        name: &str,
        order: usize,
        mul: impl Fn(Elem, Elem) -> Elem,
        perm_of: impl Fn(Elem) -> Perm,
    ) -> Self {
        if order <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order as Elem {
                for b in 0..order as Elem {
                    table.push(mul(a, b));
                }
            }
            let mut inverses = vec![0; order];
            for a in 0..order {
                inverses[a] = (0..order as Elem)
                    .find(|&b| table[a * order + b as usize] == 0)
                    .expect("group law without inverse");
            }
            FiniteGroup {
                name: name.to_string(),
                order,
                repr: Repr::Table(table),
                inverses,
                perm_gens: None,
                generation: OnceLock::new(),
            }
        } else {
            let elements: Vec<Perm> = (0..order as Elem).map(perm_of).collect();
            let index = elements
                .iter()
                .enumerate()
                .map(|(i, p)| (p.clone(), i as Elem))
                .collect();
            Self::from_perm_elements(name, elements, index)
        }
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// `Z_n` generated by the rotation `(1 2 .. n)`; element `k` is its `k`-th power.
    pub fn cyclic(n: usize) -> Self {
        let gens = if n > 1 {
            let images = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
            vec![Perm::from_images_unchecked(images)]
        } else {
            vec![]
        };
        Self::from_perm_gens(&format!("Z{n}"), n.max(1), gens).expect("cyclic group")
    }

    pub fn symmetric(n: usize) -> Self {
        let mut gens = Vec::new();
        if n >= 2 {
            let mut swap: Vec<u32> = (0..n as u32).collect();
            swap.swap(0, 1);
            gens.push(Perm::from_images_unchecked(swap));
        }
        if n >= 3 {
            gens.push(Perm::from_images_unchecked(
                (0..n as u32).map(|i| (i + 1) % n as u32).collect(),
            ));
        }
        Self::from_perm_gens(&format!("S{n}"), n.max(1), gens).expect("symmetric group")
    }

    /// Dihedral group of order `2n`, acting on the vertices of an `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3, "dihedral groups need n >= 3");
        let rot = Perm::from_images_unchecked((0..n as u32).map(|i| (i + 1) % n as u32).collect());
        let refl =
            Perm::from_images_unchecked((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect());
        Self::from_perm_gens(&format!("D{n}"), n, vec![rot, refl]).expect("dihedral group")
    }

    pub fn alternating4() -> Self {
        let a = Perm::parse_cycles("(1 2 3)", 4).unwrap();
        let b = Perm::parse_cycles("(2 3 4)", 4).unwrap();
        Self::from_perm_gens("A4", 4, vec![a, b]).expect("A4")
    }

    /// Quaternion group `Q8`; element `4*s + u` is `(-1)^s` times the unit
    /// `u` in `1, i, j, k`.
    pub fn quaternion() -> Self {
        // unit products as (sign, unit)
        const UNIT: [[(u32, u32); 4]; 4] = [
            [(0, 0), (0, 1), (0, 2), (0, 3)],
            [(0, 1), (1, 0), (0, 3), (1, 2)],
            [(0, 2), (1, 3), (1, 0), (0, 1)],
            [(0, 3), (0, 2), (1, 1), (1, 0)],
        ];
        let mut mul = Vec::with_capacity(64);
        for a in 0..8u32 {
            for b in 0..8u32 {
                let (s, u) = UNIT[(a % 4) as usize][(b % 4) as usize];
                let sign = (s + a / 4 + b / 4) % 2;
                mul.push(sign * 4 + u);
            }
        }
        Self::from_table("Q8", 8, mul).expect("Q8")
    }

    pub fn klein_four() -> Self {
        let a = Perm::parse_cycles("(1 2)", 4).unwrap();
        let b = Perm::parse_cycles("(3 4)", 4).unwrap();
        Self::from_perm_gens("V4", 4, vec![a, b]).expect("V4")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.order as Elem
    }

    pub fn has_table(&self) -> bool {
        matches!(self.repr, Repr::Table(_))
    }

    /// Row-major multiplication table, when stored.
    pub fn table(&self) -> Option<&[Elem]> {
        match &self.repr {
            Repr::Table(t) => Some(t),
            Repr::Perms { .. } => None,
        }
    }

    pub fn perm_gens(&self) -> Option<&PermGens> {
        self.perm_gens.as_ref()
    }

    /// The permutation of `a` in the action the group was generated from.
    pub fn as_perm(&self, a: Elem) -> Option<Perm> {
        let pg = self.perm_gens.as_ref()?;
        let mut p = Perm::identity(pg.degree);
        for s in self.word(a) {
            let id = self.generators()[s];
            let i = pg.ids.iter().position(|&x| x == id)?;
            p = p.then(&pg.gens[i]);
        }
        Some(p)
    }

    /// Element acting as `p`, for groups built from permutations.
    pub fn find_perm(&self, p: &Perm) -> Option<Elem> {
        if let Repr::Perms { index, .. } = &self.repr {
            return index.get(p).copied();
        }
        let degree = self.perm_gens.as_ref()?.degree;
        if p.degree() != degree {
            return None;
        }
        self.elements()
            .find(|&a| self.as_perm(a).as_ref() == Some(p))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr {
            Repr::Table(t) => t[a as usize * self.order + b as usize],
            Repr::Perms { elements, index } => {
                index[&elements[a as usize].then(&elements[b as usize])]
            }
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverses[a as usize]
    }

    /// `x * a * x^-1`.
    pub fn conj(&self, x: Elem, a: Elem) -> Elem {
        self.mul(self.mul(x, a), self.inv(x))
    }

    pub fn pow(&self, a: Elem, k: i64) -> Elem {
        let base = if k < 0 { self.inv(a) } else { a };
        let mut acc = 0;
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        acc
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Permutation representing `a`: the stored permutation for groups built
    /// from generators past the table limit, otherwise right multiplication
    /// `y -> y * a` on the element ids.
    pub fn element_perm(&self, a: Elem) -> Perm {
        match &self.repr {
            Repr::Perms { elements, .. } => elements[a as usize].clone(),
            Repr::Table(t) => Perm::from_images_unchecked(
                (0..self.order)
                    .map(|y| t[y * self.order + a as usize])
                    .collect(),
            ),
        }
    }

    fn generation(&self) -> &Generation {
        self.generation.get_or_init(|| {
            let gens = match &self.perm_gens {
                Some(pg) => {
                    let mut g: Vec<Elem> = Vec::new();
                    for &id in &pg.ids {
                        if id != 0 && !g.contains(&id) {
                            g.push(id);
                        }
                    }
                    g
                }
                None => self.greedy_generators(),
            };
            let mut parent = vec![(0, 0); self.order];
            let mut seen = vec![false; self.order];
            seen[0] = true;
            let mut bfs_order = vec![0];
            let mut head = 0;
            while head < bfs_order.len() {
                let x = bfs_order[head];
                head += 1;
                for (s, &g) in gens.iter().enumerate() {
                    let y = self.mul(x, g);
                    if !seen[y as usize] {
                        seen[y as usize] = true;
                        parent[y as usize] = (x, s as u16);
                        bfs_order.push(y);
                    }
                }
            }
            Generation {
                gens,
                parent,
                bfs_order,
            }
        })
    }

    /// Adds elements of largest order (least id on ties) until the whole group is generated.
    pub fn greedy_generators(&self) -> Vec<Elem> {
        let orders: Vec<usize> = self.elements().map(|a| self.element_order(a)).collect();
        let mut gens = Vec::new();
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut size = 1;
        while size < self.order {
            let pick = self
                .elements()
                .filter(|&a| !inside[a as usize])
                .max_by_key(|&a| (orders[a as usize], std::cmp::Reverse(a)))
                .unwrap();
            gens.push(pick);
            let closure = self.closure(&gens);
            size = closure.len();
            for x in closure {
                inside[x as usize] = true;
            }
        }
        gens
    }

    /// Generating set used for words and presentations. For groups built
    /// from permutations these are the given generators, skipping the
    /// identity and repeats.
    pub fn generators(&self) -> &[Elem] {
        &self.generation().gens
    }

    /// A shortest positive word in [`generators`](Self::generators) for `a`,
    /// as generator indices.
    pub fn word(&self, a: Elem) -> Vec<usize> {
        let gen = self.generation();
        let mut out = Vec::new();
        let mut x = a;
        while x != 0 {
            let (p, s) = gen.parent[x as usize];
            out.push(s as usize);
            x = p;
        }
        out.reverse();
        out
    }

    /// Elements in breadth-first order over the Cayley graph of the generators.
    pub(crate) fn cayley_order(&self) -> &[Elem] {
        &self.generation().bfs_order
    }

    /// Evaluates a word of generator indices.
    pub fn eval_word(&self, word: &[usize]) -> Elem {
        let gens = self.generators();
        word.iter().fold(0, |acc, &s| self.mul(acc, gens[s]))
    }

    /// The subgroup generated by `elems`, as sorted element ids.
    pub fn closure(&self, elems: &[Elem]) -> Vec<Elem> {
        let mut inside = vec![false; self.order];
        inside[0] = true;
        let mut queue = VecDeque::from([0]);
        let mut out = vec![0];
        while let Some(x) = queue.pop_front() {
            for &g in elems {
                let y = self.mul(x, g);
                if !inside[y as usize] {
                    inside[y as usize] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Builds the subgroup on the given element ids. The ids must form a
    /// subgroup; they are relabeled in increasing order so the identity stays `0`.
    pub fn subgroup(self: &Arc<Self>, name: &str, elems: &[Elem]) -> Result<Subgroup> {
        let mut members = elems.to_vec();
        members.sort_unstable();
        members.dedup();
        if members.first() != Some(&0) {
            return Err(Error::invalid_group(
                name,
                "subgroup must contain the identity",
            ));
        }
        let pos: HashMap<Elem, Elem> = members
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as Elem))
            .collect();
        for &a in &members {
            for &b in &members {
                if !pos.contains_key(&self.mul(a, b)) {
                    return Err(Error::invalid_group(name, "element set is not closed"));
                }
            }
        }
        let group = FiniteGroup::from_law(
            name,
            members.len(),
            |a, b| pos[&self.mul(members[a as usize], members[b as usize])],
            |a| self.element_perm(members[a as usize]),
        );
        Ok(Subgroup {
            group: Arc::new(group),
            ambient: Arc::clone(self),
            embedding: members,
        })
    }

    /// Conjugacy classes, each sorted, ordered by least element. The first
    /// element of each class is its representative.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Elem>> {
        let mut class_of = vec![usize::MAX; self.order];
        let mut classes = Vec::new();
        for a in self.elements() {
            if class_of[a as usize] != usize::MAX {
                continue;
            }
            let idx = classes.len();
            let mut class = vec![a];
            class_of[a as usize] = idx;
            let mut head = 0;
            // close under conjugation by generators
            while head < class.len() {
                let x = class[head];
                head += 1;
                for &g in self.generators() {
                    let y = self.conj(g, x);
                    if class_of[y as usize] == usize::MAX {
                        class_of[y as usize] = idx;
                        class.push(y);
                    }
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    pub fn centralizer(&self, a: Elem) -> Vec<Elem> {
        self.elements()
            .filter(|&x| self.mul(x, a) == self.mul(a, x))
            .collect()
    }

    /// Order of the derived subgroup `[G, G]`.
    pub fn derived_subgroup_order(&self) -> usize {
        let gens = self.generators();
        let mut comms = Vec::new();
        for &a in gens {
            for &b in gens {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                if c != 0 {
                    comms.push(c);
                }
            }
        }
        // the normal closure of generator commutators is the derived subgroup
        let mut sub = self.closure(&comms);
        loop {
            let mut extra = Vec::new();
            for &c in &sub {
                for &g in gens {
                    let d = self.conj(g, c);
                    if sub.binary_search(&d).is_err() {
                        extra.push(d);
                    }
                }
            }
            if extra.is_empty() {
                return sub.len();
            }
            let mut all = sub.clone();
            all.extend(extra);
            sub = self.closure(&all);
        }
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.elements().map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }

    /// `H x K` with element `(h, k)` at id `h * |K| + k`.
    pub fn direct_product(h: &FiniteGroup, k: &FiniteGroup) -> FiniteGroup {
        let nk = k.order() as Elem;
        FiniteGroup::from_law(
            &format!("{}x{}", h.name(), k.name()),
            h.order() * k.order(),
            |a, b| h.mul(a / nk, b / nk) * nk + k.mul(a % nk, b % nk),
            |a| h.element_perm(a / nk).disjoint_sum(&k.element_perm(a % nk)),
        )
    }

    /// Structural equality of the group laws.
    pub fn same_law(&self, other: &FiniteGroup) -> bool {
        if self.order != other.order {
            return false;
        }
        match (self.table(), other.table()) {
            (Some(a), Some(b)) => a == b,
            _ => self
                .elements()
                .all(|a| self.elements().all(|b| self.mul(a, b) == other.mul(a, b))),
        }
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name, self.order)
    }
}

/// A subgroup together with its embedding into the ambient group.
#[derive(Debug, Clone)]
pub struct Subgroup {
    pub group: Arc<FiniteGroup>,
    pub ambient: Arc<FiniteGroup>,
    /// `embedding[i]` is the ambient id of subgroup element `i`; increasing.
    pub embedding: Vec<Elem>,
}

impl Subgroup {
    pub fn contains(&self, ambient_elem: Elem) -> bool {
        self.embedding.binary_search(&ambient_elem).is_ok()
    }

    pub fn local_id(&self, ambient_elem: Elem) -> Option<Elem> {
        self.embedding
            .binary_search(&ambient_elem)
            .ok()
            .map(|i| i as Elem)
    }

    pub fn inclusion(&self) -> GroupHom {
        GroupHom {
            domain: Arc::clone(&self.group),
            codomain: Arc::clone(&self.ambient),
            image: self.embedding.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroupHom {
    pub domain: Arc<FiniteGroup>,
    pub codomain: Arc<FiniteGroup>,
    image: Vec<Elem>,
}

impl GroupHom {
    /// Checks `image(a*b) = image(a)*image(b)` on all pairs.
    pub fn new(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        image: Vec<Elem>,
    ) -> Result<Self> {
        if image.len() != domain.order() {
            return Err(Error::NotAHomomorphism(format!(
                "{} images given for a group of order {}",
                image.len(),
                domain.order()
            )));
        }
        if let Some(&x) = image.iter().find(|&&x| x as usize >= codomain.order()) {
            return Err(Error::NotAHomomorphism(format!(
                "image {x} outside {}",
                codomain.name()
            )));
        }
        if image[0] != 0 {
            return Err(Error::NotAHomomorphism("identity not preserved".into()));
        }
        // checking Cayley edges of a generating set suffices
        for a in domain.elements() {
            for &s in domain.generators() {
                let lhs = image[domain.mul(a, s) as usize];
                let rhs = codomain.mul(image[a as usize], image[s as usize]);
                if lhs != rhs {
                    return Err(Error::NotAHomomorphism(format!(
                        "image({a}*{s}) = {lhs} but image({a})*image({s}) = {rhs}"
                    )));
                }
            }
        }
        Ok(GroupHom {
            domain,
            codomain,
            image,
        })
    }

    pub(crate) fn new_unchecked(
        domain: Arc<FiniteGroup>,
        codomain: Arc<FiniteGroup>,
        image: Vec<Elem>,
    ) -> Self {
        GroupHom {
            domain,
            codomain,
            image,
        }
    }

    pub fn identity(g: &Arc<FiniteGroup>) -> Self {
        GroupHom {
            domain: Arc::clone(g),
            codomain: Arc::clone(g),
            image: g.elements().collect(),
        }
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.image[a as usize]
    }

    pub fn images(&self) -> &[Elem] {
        &self.image
    }

    pub fn is_injective(&self) -> bool {
        self.image.iter().skip(1).all(|&x| x != 0)
    }

    /// Sorted image subgroup.
    pub fn image_set(&self) -> Vec<Elem> {
        let mut v = self.image.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupHom) -> GroupHom {
        GroupHom {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&next.codomain),
            image: self.image.iter().map(|&x| next.apply(x)).collect(),
        }
    }
}

/// Searches homomorphisms `G -> H` by backtracking over images of the
/// generators of `G`, pruning by element order. With `injective`, only
/// monomorphisms are kept. Stops after `limit` results.
pub fn search_homomorphisms(
    g: &Arc<FiniteGroup>,
    h: &Arc<FiniteGroup>,
    injective: bool,
    limit: usize,
) -> Vec<GroupHom> {
    let gens = g.generators().to_vec();
    let gen_orders: Vec<usize> = gens.iter().map(|&s| g.element_order(s)).collect();
    let h_orders: Vec<usize> = h.elements().map(|x| h.element_order(x)).collect();
    let candidates: Vec<Vec<Elem>> = gen_orders
        .iter()
        .map(|&o| {
            h.elements()
                .filter(|&x| {
                    let ox = h_orders[x as usize];
                    if injective {
                        ox == o
                    } else {
                        o % ox == 0
                    }
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0; gens.len()];
    fn rec(
        depth: usize,
        g: &Arc<FiniteGroup>,
        h: &Arc<FiniteGroup>,
        candidates: &[Vec<Elem>],
        choice: &mut Vec<Elem>,
        injective: bool,
        limit: usize,
        out: &mut Vec<GroupHom>,
    ) {
        if out.len() >= limit {
            return;
        }
        if depth == candidates.len() {
            if let Some(image) = extend_generator_images(g, h, choice) {
                let hom = GroupHom::new_unchecked(Arc::clone(g), Arc::clone(h), image);
                if !injective || hom.is_injective() {
                    out.push(hom);
                }
            }
            return;
        }
        for &x in &candidates[depth] {
            choice[depth] = x;
            rec(depth + 1, g, h, candidates, choice, injective, limit, out);
            if out.len() >= limit {
                return;
            }
        }
    }
    rec(
        0,
        g,
        h,
        &candidates,
        &mut choice,
        injective,
        limit,
        &mut out,
    );
    out
}

/// Extends images of an arbitrary generating list `gens` of `g` to a
/// homomorphism, or `None` if the images do not define one.
pub fn extend_images(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[Elem],
    images: &[Elem],
) -> Option<Vec<Elem>> {
    let mut image = vec![Elem::MAX; g.order()];
    image[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(x) = queue.pop_front() {
        for (s, &gs) in gens.iter().enumerate() {
            let y = g.mul(x, gs);
            let candidate = h.mul(image[x as usize], images[s]);
            if image[y as usize] == Elem::MAX {
                image[y as usize] = candidate;
                queue.push_back(y);
            } else if image[y as usize] != candidate {
                return None;
            }
        }
    }
    if image.contains(&Elem::MAX) {
        return None;
    }
    Some(image)
}

/// Extends images of [`FiniteGroup::generators`] along the Cayley tree and
/// checks every Cayley edge; `None` if no homomorphism has these images.
pub fn extend_generator_images(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gen_images: &[Elem],
) -> Option<Vec<Elem>> {
    let gens = g.generators();
    let mut image = vec![Elem::MAX; g.order()];
    image[0] = 0;
    for &x in g.cayley_order().iter().skip(1) {
        let (p, s) = g.generation().parent[x as usize];
        image[x as usize] = h.mul(image[p as usize], gen_images[s as usize]);
    }
    for a in g.elements() {
        for (s, &gs) in gens.iter().enumerate() {
            if image[g.mul(a, gs) as usize] != h.mul(image[a as usize], gen_images[s]) {
                return None;
            }
        }
    }
    Some(image)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    #[test]
    fn stock_groups_have_expected_orders() {
        assert_eq!(FiniteGroup::trivial().order(), 1);
        assert_eq!(FiniteGroup::symmetric(3).order(), 6);
        assert_eq!(FiniteGroup::symmetric(4).order(), 24);
        assert_eq!(FiniteGroup::dihedral(4).order(), 8);
        assert_eq!(FiniteGroup::quaternion().order(), 8);
        assert_eq!(FiniteGroup::alternating4().order(), 12);
        assert_eq!(FiniteGroup::klein_four().order(), 4);
    }

    #[test]
    fn cyclic_ids_are_powers() {
        let g = FiniteGroup::cyclic(5);
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(g.mul(a, b), (a + b) % 5);
            }
        }
        assert_eq!(g.generators(), &[1]);
        assert_eq!(g.word(3), vec![0, 0, 0]);
    }

    #[test]
    fn table_validation_catches_each_axiom() {
        // Z2
        assert!(FiniteGroup::from_table("Z2", 2, vec![0, 1, 1, 0]).is_ok());
        // identity row wrong
        assert!(FiniteGroup::from_table("bad", 2, vec![1, 0, 0, 1]).is_err());
        // no inverse for 1: 1*1 = 1
        assert!(FiniteGroup::from_table("bad", 2, vec![0, 1, 1, 1]).is_err());
        // out of range
        assert!(FiniteGroup::from_table("bad", 2, vec![0, 1, 1, 5]).is_err());
        // non-associative quasigroup of order 3 with identity 0
        let quasi = vec![0, 1, 2, 1, 0, 0, 2, 0, 0];
        assert!(FiniteGroup::from_table("bad", 3, quasi).is_err());
    }

    #[test]
    fn large_groups_fall_back_to_permutations() {
        let s6 = FiniteGroup::symmetric(6);
        assert_eq!(s6.order(), 720);
        assert!(!s6.has_table());
        let a = s6.generators()[0];
        assert_eq!(s6.mul(a, a), 0);
        assert_eq!(s6.conjugacy_classes().len(), 11);
    }

    #[test]
    fn s3_classes_and_centralizers() {
        let s3 = FiniteGroup::symmetric(3);
        let classes = s3.conjugacy_classes();
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        let mut cents: Vec<usize> = classes.iter().map(|c| s3.centralizer(c[0]).len()).collect();
        cents.sort();
        assert_eq!(cents, vec![2, 3, 6]);
        assert_eq!(s3.derived_subgroup_order(), 3);
    }

    #[test]
    fn homomorphism_counts() {
        // |Hom(Z4, Z6)| = gcd(4, 6) = 2
        assert_eq!(
            search_homomorphisms(&z(4), &z(6), false, usize::MAX).len(),
            2
        );
        let s3 = Arc::new(FiniteGroup::symmetric(3));
        // End(S3): 6 automorphisms, 3 maps with image of order 2, the trivial map
        assert_eq!(search_homomorphisms(&s3, &s3, false, usize::MAX).len(), 10);
        assert_eq!(search_homomorphisms(&s3, &s3, true, usize::MAX).len(), 6);
    }

    #[test]
    fn hom_validation() {
        assert!(GroupHom::new(z(2), z(4), vec![0, 2]).is_ok());
        assert!(GroupHom::new(z(2), z(4), vec![0, 1]).is_err());
        assert!(GroupHom::new(z(2), z(4), vec![1, 0]).is_err());
    }

    #[test]
    fn subgroup_relabels_in_id_order() {
        let z6 = z(6);
        let sub = z6.subgroup("2Z6", &[4, 0, 2]).unwrap();
        assert_eq!(sub.embedding, vec![0, 2, 4]);
        assert_eq!(sub.group.mul(1, 2), 0);
        assert!(z6.subgroup("bad", &[0, 1]).is_err());
    }

    #[test]
    fn direct_product_law() {
        let p = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(3));
        assert_eq!(p.order(), 6);
        assert!(p.is_abelian());
        assert_eq!(p.order_profile(), FiniteGroup::cyclic(6).order_profile());
    }
}
