//! Finite groupoids, functors between them and natural transformations.
//!
//! Composition is written in diagrammatic order: `compose(f, g)` is defined
//! when `tgt(f) = src(g)` and is the arrow `src(f) -> tgt(g)`. Isotropy
//! groups use the opposite (function-composition) order, so that `B G` has
//! isotropy group exactly `G`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::perm::Perm;

pub type ObjId = usize;
pub type ArrowId = usize;

/// Raw groupoid tables, as read from a file, before any checking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidData {
    pub objects: Vec<String>,
    /// `(src, tgt)` per arrow id.
    pub arrows: Vec<(ObjId, ObjId)>,
    /// `(f, g, h)` meaning `compose(f, g) = h`.
    pub compose: Vec<(ArrowId, ArrowId, ArrowId)>,
    /// Identity arrow per object.
    pub identities: Vec<ArrowId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DanglingEndpoint { arrow: ArrowId },
    DanglingArrow { entry: (ArrowId, ArrowId, ArrowId) },
    ComposeOnNonComposable { f: ArrowId, g: ArrowId },
    DuplicateComposite { f: ArrowId, g: ArrowId },
    MissingComposite { f: ArrowId, g: ArrowId },
    CompositeEndpoints { f: ArrowId, g: ArrowId, h: ArrowId },
    NonAssociative { f: ArrowId, g: ArrowId, h: ArrowId },
    MissingIdentity { object: ObjId },
    IdentityNotLoop { object: ObjId, arrow: ArrowId },
    IdentityNotNeutral { object: ObjId, arrow: ArrowId },
    NoInverse { arrow: ArrowId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingEndpoint { arrow } => {
                write!(f, "arrow {arrow} has an unknown endpoint")
            }
            Violation::DanglingArrow { entry } => {
                write!(f, "compose entry {entry:?} names an unknown arrow")
            }
            Violation::ComposeOnNonComposable { f: a, g } => {
                write!(f, "compose defined on non-composable pair ({a}, {g})")
            }
            Violation::DuplicateComposite { f: a, g } => {
                write!(f, "pair ({a}, {g}) composed twice")
            }
            Violation::MissingComposite { f: a, g } => {
                write!(f, "composable pair ({a}, {g}) has no composite")
            }
            Violation::CompositeEndpoints { f: a, g, h } => {
                write!(f, "composite {h} of ({a}, {g}) has wrong endpoints")
            }
            Violation::NonAssociative { f: a, g, h } => {
                write!(f, "not associative on ({a}, {g}, {h})")
            }
            Violation::MissingIdentity { object } => write!(f, "object {object} has no identity"),
            Violation::IdentityNotLoop { object, arrow } => {
                write!(f, "identity {arrow} of object {object} is not a loop at it")
            }
            Violation::IdentityNotNeutral { object, arrow } => {
                write!(
                    f,
                    "identity of object {object} is not neutral for arrow {arrow}"
                )
            }
            Violation::NoInverse { arrow } => write!(f, "arrow {arrow} has no inverse"),
        }
    }
}

/// Every violated axiom; empty iff the tables form a groupoid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every groupoid axiom exhaustively.
pub fn validate_groupoid(data: &GroupoidData) -> ValidationReport {
    let mut violations = Vec::new();
    let n_obj = data.objects.len();
    let n_arr = data.arrows.len();
    for (a, &(s, t)) in data.arrows.iter().enumerate() {
        if s >= n_obj || t >= n_obj {
            violations.push(Violation::DanglingEndpoint { arrow: a });
        }
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }
    let mut table: HashMap<(ArrowId, ArrowId), ArrowId> = HashMap::new();
    for &(f, g, h) in &data.compose {
        if f >= n_arr || g >= n_arr || h >= n_arr {
            violations.push(Violation::DanglingArrow { entry: (f, g, h) });
            continue;
        }
        if data.arrows[f].1 != data.arrows[g].0 {
            violations.push(Violation::ComposeOnNonComposable { f, g });
            continue;
        }
        if table.insert((f, g), h).is_some() {
            violations.push(Violation::DuplicateComposite { f, g });
        }
        if data.arrows[h] != (data.arrows[f].0, data.arrows[g].1) {
            violations.push(Violation::CompositeEndpoints { f, g, h });
        }
    }
    let mut out: Vec<Vec<ArrowId>> = vec![Vec::new(); n_obj];
    for (a, &(s, _)) in data.arrows.iter().enumerate() {
        out[s].push(a);
    }
    for f in 0..n_arr {
        for &g in &out[data.arrows[f].1] {
            if !table.contains_key(&(f, g)) {
                violations.push(Violation::MissingComposite { f, g });
            }
        }
    }
    for f in 0..n_arr {
        for &g in &out[data.arrows[f].1] {
            let Some(&fg) = table.get(&(f, g)) else {
                continue;
            };
            for &h in &out[data.arrows[g].1] {
                let Some(&gh) = table.get(&(g, h)) else {
                    continue;
                };
                match (table.get(&(fg, h)), table.get(&(f, gh))) {
                    (Some(a), Some(b)) if a == b => {}
                    (Some(_), Some(_)) => violations.push(Violation::NonAssociative { f, g, h }),
                    _ => {}
                }
            }
        }
    }
    if data.identities.len() != n_obj {
        for object in data.identities.len()..n_obj {
            violations.push(Violation::MissingIdentity { object });
        }
    }
    for (object, &e) in data.identities.iter().enumerate().take(n_obj) {
        if e >= n_arr || data.arrows[e] != (object, object) {
            violations.push(Violation::IdentityNotLoop { object, arrow: e });
            continue;
        }
        for (a, &(s, t)) in data.arrows.iter().enumerate() {
            if t == object && table.get(&(a, e)).is_some_and(|&x| x != a) {
                violations.push(Violation::IdentityNotNeutral { object, arrow: a });
            }
            if s == object && table.get(&(e, a)).is_some_and(|&x| x != a) {
                violations.push(Violation::IdentityNotNeutral { object, arrow: a });
            }
        }
    }
    if violations.is_empty() {
        for f in 0..n_arr {
            let (s, t) = data.arrows[f];
            let has_inverse = out[t].iter().any(|&g| {
                data.arrows[g].1 == s
                    && table.get(&(f, g)) == Some(&data.identities[s])
                    && table.get(&(g, f)) == Some(&data.identities[t])
            });
            if !has_inverse {
                violations.push(Violation::NoInverse { arrow: f });
            }
        }
    }
    ValidationReport { violations }
}

/// A validated finite groupoid. Immutable; hom-sets are indexed eagerly.
#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<(ObjId, ObjId)>,
    /// Arrows out of each object, increasing.
    out: Vec<Vec<ArrowId>>,
    /// Position of each arrow in its source's `out` list.
    out_pos: Vec<usize>,
    /// `comp[comp_start[f] + out_pos[g]] = compose(f, g)`.
    comp: Vec<ArrowId>,
    comp_start: Vec<usize>,
    identities: Vec<ArrowId>,
    inverses: Vec<ArrowId>,
    /// Arrows out of each object ordered by target, then id.
    by_target: Vec<Vec<ArrowId>>,
    /// Per object, `(target, start, end)` runs into `by_target`.
    hom_runs: Vec<Vec<(ObjId, usize, usize)>>,
}

impl PartialEq for FiniteGroupoid {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.arrows == other.arrows
            && self.comp == other.comp
            && self.identities == other.identities
    }
}

impl Eq for FiniteGroupoid {}

impl FiniteGroupoid {
    pub fn from_data(data: GroupoidData) -> Result<Self> {
        let report = validate_groupoid(&data);
        if !report.is_ok() {
            return Err(Error::InvalidGroupoid(report));
        }
        let table: HashMap<(ArrowId, ArrowId), ArrowId> =
            data.compose.iter().map(|&(f, g, h)| ((f, g), h)).collect();
        Ok(Self::from_parts(
            data.objects,
            data.arrows,
            data.identities,
            |f, g| table[&(f, g)],
        ))
    }

    /// Builds the indexed form from a composition law known to satisfy the axioms.
    pub(crate) fn from_parts(
        objects: Vec<String>,
        arrows: Vec<(ObjId, ObjId)>,
        identities: Vec<ArrowId>,
        compose: impl Fn(ArrowId, ArrowId) -> ArrowId,
    ) -> Self {
        Self::from_rows(objects, arrows, identities, |f, out, row| {
            row.extend(out.iter().map(|&g| compose(f, g)))
        })
    }

    /// As `from_parts`, with `fill(f, out, row)` pushing `compose(f, g)` for
    /// each `g` in `out`, the arrows leaving the target of `f` in increasing order.
    pub(crate) fn from_rows(
        objects: Vec<String>,
        arrows: Vec<(ObjId, ObjId)>,
        identities: Vec<ArrowId>,
        mut fill: impl FnMut(ArrowId, &[ArrowId], &mut Vec<ArrowId>),
    ) -> Self {
        let mut out: Vec<Vec<ArrowId>> = vec![Vec::new(); objects.len()];
        let mut out_pos = vec![0; arrows.len()];
        for (a, &(s, _)) in arrows.iter().enumerate() {
            out_pos[a] = out[s].len();
            out[s].push(a);
        }
        let mut by_target = out.clone();
        let mut hom_runs = Vec::with_capacity(out.len());
        for sorted in &mut by_target {
            sorted.sort_by_key(|&a| arrows[a].1);
            let mut runs = Vec::new();
            let mut start = 0;
            for run in sorted.chunk_by(|&a, &b| arrows[a].1 == arrows[b].1) {
                runs.push((arrows[run[0]].1, start, start + run.len()));
                start += run.len();
            }
            hom_runs.push(runs);
        }
        let hom = |x: ObjId, y: ObjId| -> &[ArrowId] {
            match hom_runs[x].binary_search_by_key(&y, |r| r.0) {
                Ok(i) => &by_target[x][hom_runs[x][i].1..hom_runs[x][i].2],
                Err(_) => &[],
            }
        };
        let mut comp = Vec::with_capacity(arrows.iter().map(|&(_, t)| out[t].len()).sum());
        let mut comp_start = Vec::with_capacity(arrows.len());
        for (f, &(_, t)) in arrows.iter().enumerate() {
            comp_start.push(comp.len());
            fill(f, &out[t], &mut comp);
            debug_assert_eq!(comp.len() - comp_start[f], out[t].len());
        }
        let mut inverses = vec![0; arrows.len()];
        for (s, runs) in hom_runs.iter().enumerate() {
            for &(t, start, end) in runs {
                let back = hom(t, s);
                for &f in &by_target[s][start..end] {
                    inverses[f] = *back
                        .iter()
                        .find(|&&g| comp[comp_start[f] + out_pos[g]] == identities[s])
                        .expect("arrow without inverse");
                }
            }
        }
        FiniteGroupoid {
            objects,
            arrows,
            out,
            out_pos,
            comp,
            comp_start,
            identities,
            inverses,
            by_target,
            hom_runs,
        }
    }

    pub fn empty() -> Self {
        Self::from_parts(vec![], vec![], vec![], |_, _| unreachable!())
    }

    /// One object, identity only.
    pub fn unit(name: &str) -> Self {
        Self::discrete(&[name])
    }

    /// Objects with identity arrows only.
    pub fn discrete(names: &[&str]) -> Self {
        let objects: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let arrows = (0..objects.len()).map(|i| (i, i)).collect();
        let identities = (0..objects.len()).collect();
        Self::from_parts(objects, arrows, identities, |f, _| f)
    }

    /// The one-object groupoid `B G`; arrow ids are element ids.
    pub fn classifying(group: &FiniteGroup) -> Self {
        GroupAction::on_point(Arc::new(group.clone()))
            .groupoid()
            .with_object_names(vec!["*".into()])
    }

    /// The connected groupoid on `n` objects with exactly one arrow between
    /// any two; arrow `i -> j` has id `i * n + j`.
    pub fn indiscrete(names: &[&str]) -> Self {
        let n = names.len();
        let objects = names.iter().map(|s| s.to_string()).collect();
        let arrows = (0..n * n).map(|a| (a / n, a % n)).collect();
        let identities = (0..n).map(|i| i * n + i).collect();
        Self::from_parts(objects, arrows, identities, |f, g| (f / n) * n + g % n)
    }

    pub fn with_object_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.objects.len());
        self.objects = names;
        self
    }

    /// Disjoint union; objects and arrows of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &FiniteGroupoid) -> FiniteGroupoid {
        let no = self.objects.len();
        let na = self.arrows.len();
        let mut objects = self.objects.clone();
        objects.extend(other.objects.iter().cloned());
        let mut arrows = self.arrows.clone();
        arrows.extend(other.arrows.iter().map(|&(s, t)| (s + no, t + no)));
        let mut identities = self.identities.clone();
        identities.extend(other.identities.iter().map(|&e| e + na));
        Self::from_parts(objects, arrows, identities, |f, g| {
            if f < na {
                self.compose(f, g)
            } else {
                other.compose(f - na, g - na) + na
            }
        })
    }

    pub fn to_data(&self) -> GroupoidData {
        let mut compose = Vec::new();
        for f in 0..self.arrows.len() {
            for &g in &self.out[self.arrows[f].1] {
                compose.push((f, g, self.compose(f, g)));
            }
        }
        GroupoidData {
            objects: self.objects.clone(),
            arrows: self.arrows.clone(),
            compose,
            identities: self.identities.clone(),
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.objects[x]
    }

    pub fn object_id(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn src(&self, a: ArrowId) -> ObjId {
        self.arrows[a].0
    }

    pub fn tgt(&self, a: ArrowId) -> ObjId {
        self.arrows[a].1
    }

    pub fn identity(&self, x: ObjId) -> ArrowId {
        self.identities[x]
    }

    pub fn inverse(&self, a: ArrowId) -> ArrowId {
        self.inverses[a]
    }

    /// `f` then `g`. Panics if `tgt(f) != src(g)`.
    pub fn compose(&self, f: ArrowId, g: ArrowId) -> ArrowId {
        assert_eq!(
            self.tgt(f),
            self.src(g),
            "arrows {f} and {g} are not composable"
        );
        self.comp[self.comp_start[f] + self.out_pos[g]]
    }

    pub fn try_compose(&self, f: ArrowId, g: ArrowId) -> Option<ArrowId> {
        (self.tgt(f) == self.src(g)).then(|| self.comp[self.comp_start[f] + self.out_pos[g]])
    }

    /// Arrows `x -> y`, increasing.
    pub fn hom(&self, x: ObjId, y: ObjId) -> &[ArrowId] {
        match self.hom_runs[x].binary_search_by_key(&y, |r| r.0) {
            Ok(i) => {
                let (_, start, end) = self.hom_runs[x][i];
                &self.by_target[x][start..end]
            }
            Err(_) => &[],
        }
    }

    pub fn arrows_from(&self, x: ObjId) -> &[ArrowId] {
        &self.out[x]
    }

    /// Position of `a` in `arrows_from(src(a))`.
    pub(crate) fn out_position(&self, a: ArrowId) -> usize {
        self.out_pos[a]
    }

    pub fn check_object(&self, x: ObjId) -> Result<()> {
        if x < self.objects.len() {
            Ok(())
        } else {
            Err(Error::UnknownObject(x.to_string()))
        }
    }

    /// The group of arrows `x -> x`. Element `i` of the result is arrow
    /// `labels[i]`; the identity comes first, the rest in arrow-id order.
    pub fn isotropy(&self, x: ObjId) -> Result<Isotropy> {
        self.check_object(x)?;
        let e = self.identity(x);
        let mut labels = vec![e];
        labels.extend(self.hom(x, x).iter().copied().filter(|&a| a != e));
        let pos: HashMap<ArrowId, Elem> = labels
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, i as Elem))
            .collect();
        let n = labels.len();
        // a * b is "b then a"
        let group = FiniteGroup::from_law(
            &format!("Aut({})", self.objects[x]),
            n,
            |a, b| pos[&self.compose(labels[b as usize], labels[a as usize])],
            |a| {
                Perm::from_images_unchecked(
                    (0..n)
                        .map(|y| pos[&self.compose(labels[a as usize], labels[y])])
                        .collect(),
                )
            },
        );
        Ok(Isotropy {
            object: x,
            group: Arc::new(group),
            labels,
        })
    }

    /// Connected components, each sorted, ordered by least object.
    pub fn pi0(&self) -> Vec<Vec<ObjId>> {
        let n = self.objects.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for &(s, t) in &self.arrows {
            let (a, b) = (find(&mut parent, s), find(&mut parent, t));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut classes: Vec<Vec<ObjId>> = Vec::new();
        let mut index: HashMap<usize, usize> = HashMap::new();
        for x in 0..n {
            let r = find(&mut parent, x);
            let i = *index.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[i].push(x);
        }
        classes
    }

    /// Orbit set `X/R` with the quotient map, computed by searching along arrows.
    pub fn coarse_space(&self) -> CoarseSpace {
        let n = self.objects.len();
        let mut projection = vec![usize::MAX; n];
        let mut points = Vec::new();
        for x in 0..n {
            if projection[x] != usize::MAX {
                continue;
            }
            let p = points.len();
            points.push(x);
            projection[x] = p;
            let mut queue = VecDeque::from([x]);
            while let Some(y) = queue.pop_front() {
                for &a in &self.out[y] {
                    let z = self.tgt(a);
                    if projection[z] == usize::MAX {
                        projection[z] = p;
                        queue.push_back(z);
                    }
                }
            }
        }
        CoarseSpace {
            representatives: points,
            projection,
        }
    }

    /// Objects isomorphic to `x`, increasing.
    pub fn orbit(&self, x: ObjId) -> Result<Vec<ObjId>> {
        self.check_object(x)?;
        let set: BTreeSet<ObjId> = self.out[x].iter().map(|&a| self.tgt(a)).collect();
        Ok(set.into_iter().collect())
    }

    /// Full subgroupoid on `sub`, objects in increasing id order, arrows in
    /// increasing id order.
    pub fn restrict(&self, sub: &[ObjId]) -> Result<FiniteGroupoid> {
        Ok(self.restrict_with_inclusion(sub)?.0)
    }

    /// Full subgroupoid together with the arrow ids it keeps.
    pub(crate) fn restrict_with_inclusion(
        &self,
        sub: &[ObjId],
    ) -> Result<(FiniteGroupoid, Vec<ObjId>, Vec<ArrowId>)> {
        for &x in sub {
            self.check_object(x)?;
        }
        let keep: BTreeSet<ObjId> = sub.iter().copied().collect();
        let kept_objects: Vec<ObjId> = keep.iter().copied().collect();
        let obj_pos: HashMap<ObjId, ObjId> = kept_objects
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i))
            .collect();
        let kept_arrows: Vec<ArrowId> = (0..self.arrows.len())
            .filter(|&a| keep.contains(&self.src(a)) && keep.contains(&self.tgt(a)))
            .collect();
        let arr_pos: HashMap<ArrowId, ArrowId> = kept_arrows
            .iter()
            .enumerate()
            .map(|(i, &a)| (a, i))
            .collect();
        let g = Self::from_parts(
            kept_objects
                .iter()
                .map(|&x| self.objects[x].clone())
                .collect(),
            kept_arrows
                .iter()
                .map(|&a| (obj_pos[&self.src(a)], obj_pos[&self.tgt(a)]))
                .collect(),
            kept_objects
                .iter()
                .map(|&x| arr_pos[&self.identity(x)])
                .collect(),
            |f, g| arr_pos[&self.compose(kept_arrows[f], kept_arrows[g])],
        );
        Ok((g, kept_objects, kept_arrows))
    }
}

/// The orbit set of a finite groupoid with its quotient map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoarseSpace {
    /// Least object of each orbit, increasing.
    pub representatives: Vec<ObjId>,
    pub projection: Vec<usize>,
}

impl CoarseSpace {
    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }
}

/// An isotropy group, with element `i` labelled by arrow `labels[i]`.
#[derive(Debug, Clone)]
pub struct Isotropy {
    pub object: ObjId,
    pub group: Arc<FiniteGroup>,
    pub labels: Vec<ArrowId>,
}

impl Isotropy {
    pub fn element_of(&self, arrow: ArrowId) -> Option<Elem> {
        self.labels
            .iter()
            .position(|&a| a == arrow)
            .map(|i| i as Elem)
    }
}

/// A left action given by its full table: `act[g][x]` is `g . x`.
#[derive(Debug, Clone)]
pub struct GroupAction {
    pub group: Arc<FiniteGroup>,
    pub points: Vec<String>,
    pub act: Vec<Vec<usize>>,
}

impl GroupAction {
    /// Checks both action laws exhaustively.
    pub fn new(group: Arc<FiniteGroup>, points: Vec<String>, act: Vec<Vec<usize>>) -> Result<Self> {
        let n = points.len();
        if act.len() != group.order() || act.iter().any(|row| row.len() != n) {
            return Err(Error::NotAnAction("table has the wrong shape".into()));
        }
        if let Some(x) = act.iter().flatten().find(|&&x| x >= n) {
            return Err(Error::NotAnAction(format!("point {x} out of range")));
        }
        for x in 0..n {
            if act[0][x] != x {
                return Err(Error::NotAnAction(format!(
                    "identity moves point {}",
                    points[x]
                )));
            }
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b) as usize;
                for x in 0..n {
                    if act[ab][x] != act[a as usize][act[b as usize][x]] {
                        return Err(Error::NotAnAction(format!(
                            "({a}*{b}).{} differs from {a}.({b}.{})",
                            points[x], points[x]
                        )));
                    }
                }
            }
        }
        Ok(GroupAction { group, points, act })
    }

    pub fn on_point(group: Arc<FiniteGroup>) -> Self {
        let act = vec![vec![0]; group.order()];
        GroupAction {
            group,
            points: vec!["*".into()],
            act,
        }
    }

    /// Trivial action on the named points.
    pub fn trivial(group: Arc<FiniteGroup>, points: &[&str]) -> Self {
        let act = vec![(0..points.len()).collect(); group.order()];
        GroupAction {
            group,
            points: points.iter().map(|s| s.to_string()).collect(),
            act,
        }
    }

    /// Action of a permutation group on its points `1..=degree`.
    pub fn natural(group: Arc<FiniteGroup>) -> Result<Self> {
        let degree = group.perm_gens().map(|p| p.degree).ok_or_else(|| {
            Error::NotAnAction(format!("{} has no permutation generators", group.name()))
        })?;
        let pg = group.perm_gens().unwrap();
        let perm_of = |a: Elem| {
            group
                .word(a)
                .iter()
                .fold(Perm::identity(degree), |acc, &s| {
                    let id = group.generators()[s];
                    let pos = pg.ids.iter().position(|&i| i == id).unwrap();
                    acc.then(&pg.gens[pos])
                })
        };
        // products of perms read left to right, so g.x = x under perm(g^-1) is a left action
        let act = group
            .elements()
            .map(|a| {
                let p = perm_of(group.inv(a));
                (0..degree).map(|x| p.apply(x)).collect()
            })
            .collect();
        Self::new(
            Arc::clone(&group),
            (1..=degree).map(|i| i.to_string()).collect(),
            act,
        )
    }

    /// Action generated by one permutation `p` of `points`, for `Z_n` with `n` the order of `p`.
    pub fn cyclic(points: &[&str], p: &Perm) -> Result<Self> {
        let mut powers = vec![Perm::identity(p.degree())];
        loop {
            let next = powers.last().unwrap().then(p);
            if next.is_identity() {
                break;
            }
            powers.push(next);
        }
        let group = Arc::new(FiniteGroup::cyclic(powers.len()));
        let act = powers
            .iter()
            .map(|q| (0..p.degree()).map(|x| q.apply(x)).collect())
            .collect();
        Self::new(group, points.iter().map(|s| s.to_string()).collect(), act)
    }

    /// The action groupoid `[G x X => X]`; arrow `(g, x): x -> g.x` has id `x * |G| + g`.
    pub fn groupoid(&self) -> FiniteGroupoid {
        let ng = self.group.order();
        let n = self.points.len();
        let arrows = (0..n * ng)
            .map(|a| (a / ng, self.act[a % ng][a / ng]))
            .collect();
        let identities = (0..n).map(|x| x * ng).collect();
        // (g, x) then (h, g.x) is (h g, x)
        FiniteGroupoid::from_parts(self.points.clone(), arrows, identities, |f, h| {
            let (g, x) = (f % ng, f / ng);
            let hh = h % ng;
            x * ng + self.group.mul(hh as Elem, g as Elem) as usize
        })
    }

    pub fn is_free(&self) -> bool {
        (0..self.points.len()).all(|x| {
            self.group
                .elements()
                .skip(1)
                .all(|g| self.act[g as usize][x] != x)
        })
    }
}

/// Builds the action groupoid, checking the action laws.
pub fn action_groupoid(
    group: Arc<FiniteGroup>,
    points: Vec<String>,
    act: Vec<Vec<usize>>,
) -> Result<FiniteGroupoid> {
    Ok(GroupAction::new(group, points, act)?.groupoid())
}

#[derive(Debug, Clone)]
pub struct GroupoidFunctor {
    pub domain: Arc<FiniteGroupoid>,
    pub codomain: Arc<FiniteGroupoid>,
    pub obj_map: Vec<ObjId>,
    pub arr_map: Vec<ArrowId>,
}

impl GroupoidFunctor {
    /// Checks that the maps preserve endpoints, identities and composition.
    pub fn new(
        domain: Arc<FiniteGroupoid>,
        codomain: Arc<FiniteGroupoid>,
        obj_map: Vec<ObjId>,
        arr_map: Vec<ArrowId>,
    ) -> Result<Self> {
        if obj_map.len() != domain.object_count() || arr_map.len() != domain.arrow_count() {
            return Err(Error::NotAFunctor("maps have the wrong length".into()));
        }
        if obj_map.iter().any(|&x| x >= codomain.object_count())
            || arr_map.iter().any(|&a| a >= codomain.arrow_count())
        {
            return Err(Error::NotAFunctor("image out of range".into()));
        }
        for a in 0..domain.arrow_count() {
            let fa = arr_map[a];
            if codomain.src(fa) != obj_map[domain.src(a)]
                || codomain.tgt(fa) != obj_map[domain.tgt(a)]
            {
                return Err(Error::NotAFunctor(format!(
                    "arrow {a} endpoints not preserved"
                )));
            }
        }
        for x in 0..domain.object_count() {
            if arr_map[domain.identity(x)] != codomain.identity(obj_map[x]) {
                return Err(Error::NotAFunctor(format!("identity of {x} not preserved")));
            }
        }
        for f in 0..domain.arrow_count() {
            for &g in domain.arrows_from(domain.tgt(f)) {
                if arr_map[domain.compose(f, g)] != codomain.compose(arr_map[f], arr_map[g]) {
                    return Err(Error::NotAFunctor(format!(
                        "composite of ({f}, {g}) not preserved"
                    )));
                }
            }
        }
        Ok(GroupoidFunctor {
            domain,
            codomain,
            obj_map,
            arr_map,
        })
    }

    pub(crate) fn new_unchecked(
        domain: Arc<FiniteGroupoid>,
        codomain: Arc<FiniteGroupoid>,
        obj_map: Vec<ObjId>,
        arr_map: Vec<ArrowId>,
    ) -> Self {
        GroupoidFunctor {
            domain,
            codomain,
            obj_map,
            arr_map,
        }
    }

    pub fn identity(g: &Arc<FiniteGroupoid>) -> Self {
        GroupoidFunctor {
            domain: Arc::clone(g),
            codomain: Arc::clone(g),
            obj_map: (0..g.object_count()).collect(),
            arr_map: (0..g.arrow_count()).collect(),
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupoidFunctor) -> GroupoidFunctor {
        GroupoidFunctor {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&next.codomain),
            obj_map: self.obj_map.iter().map(|&x| next.obj_map[x]).collect(),
            arr_map: self.arr_map.iter().map(|&a| next.arr_map[a]).collect(),
        }
    }

    /// Functor `B H -> B G` induced by a homomorphism.
    pub fn from_group_hom(hom: &crate::group::GroupHom) -> Self {
        GroupoidFunctor {
            domain: Arc::new(FiniteGroupoid::classifying(&hom.domain)),
            codomain: Arc::new(FiniteGroupoid::classifying(&hom.codomain)),
            obj_map: vec![0],
            arr_map: hom.images().iter().map(|&x| x as usize).collect(),
        }
    }

    /// The functor `B H -> B G` of a subgroup inclusion.
    pub fn from_subgroup(sub: &Subgroup) -> Self {
        Self::from_group_hom(&sub.inclusion())
    }
}

/// Components `S(x) -> T(x)` for functors `S, T` with common domain and codomain.
#[derive(Debug, Clone)]
pub struct NaturalTransformation {
    pub source: GroupoidFunctor,
    pub target: GroupoidFunctor,
    pub component: Vec<ArrowId>,
}

impl NaturalTransformation {
    /// True iff every naturality square commutes.
    pub fn is_natural(&self) -> bool {
        check_natural_transformation(self)
    }
}

/// Exhaustive naturality check: for `u: x -> y`,
/// `component(x) ; T(u) = S(u) ; component(y)`.
pub fn check_natural_transformation(nt: &NaturalTransformation) -> bool {
    let d = &nt.source.domain;
    let c = &nt.source.codomain;
    if !Arc::ptr_eq(d, &nt.target.domain) && **d != *nt.target.domain {
        return false;
    }
    if !Arc::ptr_eq(c, &nt.target.codomain) && **c != *nt.target.codomain {
        return false;
    }
    if nt.component.len() != d.object_count() {
        return false;
    }
    for x in 0..d.object_count() {
        let a = nt.component[x];
        if a >= c.arrow_count()
            || c.src(a) != nt.source.obj_map[x]
            || c.tgt(a) != nt.target.obj_map[x]
        {
            return false;
        }
    }
    (0..d.arrow_count()).all(|u| {
        let (x, y) = (d.src(u), d.tgt(u));
        c.compose(nt.component[x], nt.target.arr_map[u])
            == c.compose(nt.source.arr_map[u], nt.component[y])
    })
}

/// Every functor `a -> b`. A functor is fixed on each component of `a` by
/// the image of the component's least object, a homomorphism of isotropy
/// groups there, and the images of chosen arrows from that object.
pub fn enumerate_functors(
    a: &Arc<FiniteGroupoid>,
    b: &Arc<FiniteGroupoid>,
    limit: usize,
) -> Vec<GroupoidFunctor> {
    struct Comp {
        members: Vec<ObjId>,
        /// chosen arrow root -> x, per member
        spine: Vec<ArrowId>,
        iso: Isotropy,
    }
    let comps: Vec<Comp> = a
        .pi0()
        .into_iter()
        .map(|members| {
            let root = members[0];
            let spine = members.iter().map(|&x| a.hom(root, x)[0]).collect();
            Comp {
                members,
                spine,
                iso: a.isotropy(root).unwrap(),
            }
        })
        .collect();
    // per component: every (target root, hom, arrows) choice, as partial maps
    let mut per_comp: Vec<Vec<(Vec<(ObjId, ObjId)>, Vec<(ArrowId, ArrowId)>)>> = Vec::new();
    for comp in &comps {
        let mut options = Vec::new();
        for c in 0..b.object_count() {
            let iso_c = b.isotropy(c).unwrap();
            let homs = crate::group::search_homomorphisms(
                &comp.iso.group,
                &iso_c.group,
                false,
                usize::MAX,
            );
            // choices of theta_x: c -> F(x) for non-root members
            let others: Vec<usize> = (1..comp.members.len()).collect();
            let reach: Vec<ArrowId> = b.arrows_from(c).to_vec();
            let mut thetas: Vec<Vec<ArrowId>> = vec![vec![]];
            for _ in &others {
                let mut next = Vec::new();
                for t in &thetas {
                    for &r in &reach {
                        let mut t2 = t.clone();
                        t2.push(r);
                        next.push(t2);
                    }
                }
                next.truncate(limit.max(1));
                thetas = next;
            }
            for hom in &homs {
                for theta in &thetas {
                    let theta_of = |i: usize| if i == 0 { b.identity(c) } else { theta[i - 1] };
                    let pos: HashMap<ObjId, usize> = comp
                        .members
                        .iter()
                        .enumerate()
                        .map(|(i, &x)| (x, i))
                        .collect();
                    let objs: Vec<(ObjId, ObjId)> = comp
                        .members
                        .iter()
                        .enumerate()
                        .map(|(i, &x)| (x, b.tgt(theta_of(i))))
                        .collect();
                    let mut arrs = Vec::new();
                    for &x in &comp.members {
                        for &u in a.arrows_from(x) {
                            let y = a.tgt(u);
                            let (ix, iy) = (pos[&x], pos[&y]);
                            let loop_at_root =
                                a.compose(a.compose(comp.spine[ix], u), a.inverse(comp.spine[iy]));
                            let elem = comp.iso.element_of(loop_at_root).unwrap();
                            let image = iso_c.labels[hom.apply(elem) as usize];
                            let fu =
                                b.compose(b.compose(b.inverse(theta_of(ix)), image), theta_of(iy));
                            arrs.push((u, fu));
                        }
                    }
                    options.push((objs, arrs));
                    if options.len() > limit {
                        break;
                    }
                }
            }
        }
        per_comp.push(options);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_comp.len()];
    if per_comp.iter().any(|o| o.is_empty()) {
        return out;
    }
    loop {
        let mut obj_map = vec![0; a.object_count()];
        let mut arr_map = vec![0; a.arrow_count()];
        for (ci, &k) in idx.iter().enumerate() {
            let (objs, arrs) = &per_comp[ci][k];
            for &(x, y) in objs {
                obj_map[x] = y;
            }
            for &(u, v) in arrs {
                arr_map[u] = v;
            }
        }
        out.push(GroupoidFunctor::new_unchecked(
            Arc::clone(a),
            Arc::clone(b),
            obj_map,
            arr_map,
        ));
        if out.len() >= limit {
            return out;
        }
        // odometer
        let mut i = 0;
        loop {
            if i == idx.len() {
                return out;
            }
            idx[i] += 1;
            if idx[i] < per_comp[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3))
    }

    fn z2_swap() -> FiniteGroupoid {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        action_groupoid(
            z2,
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn unit_groupoid_validates() {
        let data = FiniteGroupoid::unit("x").to_data();
        assert!(validate_groupoid(&data).is_ok());
        assert_eq!(data.compose, vec![(0, 0, 0)]);
    }

    #[test]
    fn non_associative_triple_is_reported() {
        // three loops at one object; 0 is neutral but (1;1);2 != 1;(1;2)
        let table = [[0, 1, 2], [1, 0, 0], [2, 0, 0]];
        let data = GroupoidData {
            objects: vec!["x".into()],
            arrows: vec![(0, 0); 3],
            compose: (0..3)
                .flat_map(|f| (0..3).map(move |g| (f, g, table[f][g])))
                .collect(),
            identities: vec![0],
        };
        let report = validate_groupoid(&data);
        assert!(report
            .violations
            .contains(&Violation::NonAssociative { f: 1, g: 1, h: 2 }));
    }

    #[test]
    fn missing_composite_is_reported() {
        let mut data = FiniteGroupoid::unit("x").to_data();
        data.compose.clear();
        let report = validate_groupoid(&data);
        assert_eq!(
            report.violations,
            vec![Violation::MissingComposite { f: 0, g: 0 }]
        );
    }

    #[test]
    fn action_groupoid_shapes() {
        let triv = FiniteGroupoid::classifying(&FiniteGroup::trivial());
        assert_eq!((triv.object_count(), triv.arrow_count()), (1, 1));

        let swap = z2_swap();
        assert_eq!((swap.object_count(), swap.arrow_count()), (2, 4));
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(swap.hom(x, y).len(), 1);
            }
        }
        assert!(validate_groupoid(&swap.to_data()).is_ok());

        let bs3 = FiniteGroupoid::classifying(&s3());
        assert_eq!((bs3.object_count(), bs3.arrow_count()), (1, 6));
        assert!(validate_groupoid(&bs3.to_data()).is_ok());
    }

    #[test]
    fn not_an_action_is_rejected() {
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let err = action_groupoid(z2.clone(), vec!["a".into()], vec![vec![0], vec![1]]);
        assert!(err.is_err());
        // Z3 "acting" on two points by a swap breaks the composition law
        let z3 = Arc::new(FiniteGroup::cyclic(3));
        let err = action_groupoid(
            z3,
            vec!["a".into(), "b".into()],
            vec![vec![0, 1], vec![1, 0], vec![1, 0]],
        );
        assert!(matches!(err, Err(Error::NotAnAction(_))));
    }

    #[test]
    fn isotropy_examples() {
        let bs3 = FiniteGroupoid::classifying(&s3());
        let iso = bs3.isotropy(0).unwrap();
        assert!(iso.group.same_law(&s3()));
        assert_eq!(z2_swap().isotropy(0).unwrap().group.order(), 1);
        let z2 = Arc::new(FiniteGroup::cyclic(2));
        let triv = GroupAction::trivial(z2, &["a"]).groupoid();
        assert_eq!(triv.isotropy(0).unwrap().group.order(), 2);
        assert!(matches!(bs3.isotropy(3), Err(Error::UnknownObject(_))));
    }

    #[test]
    fn pi0_and_coarse_space() {
        assert_eq!(z2_swap().pi0(), vec![vec![0, 1]]);
        let bs3 = FiniteGroupoid::classifying(&s3());
        let both = bs3.disjoint_union(&FiniteGroupoid::unit("u"));
        assert_eq!(both.pi0().len(), 2);
        let p = Perm::parse_cycles("(1 2 3)(4 5 6)", 6).unwrap();
        let g = GroupAction::cyclic(&["1", "2", "3", "4", "5", "6"], &p)
            .unwrap()
            .groupoid();
        assert_eq!(g.pi0(), vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(bs3.coarse_space().len(), 1);
        assert_eq!(z2_swap().coarse_space().len(), 1);
        let three = FiniteGroupoid::discrete(&["a", "b", "c"]);
        assert_eq!(three.coarse_space().len(), 3);
        assert_eq!(three.coarse_space().projection, vec![0, 1, 2]);
    }

    #[test]
    fn restriction_examples() {
        let swap = z2_swap();
        assert_eq!(swap.restrict(&[0, 1]).unwrap(), swap);
        let r = swap.restrict(&[0]).unwrap();
        assert_eq!((r.object_count(), r.arrow_count()), (1, 1));
        let bs3 = FiniteGroupoid::classifying(&s3());
        assert_eq!(bs3.restrict(&[0]).unwrap(), bs3);
        assert!(swap.restrict(&[5]).is_err());
    }

    #[test]
    fn naturality_examples() {
        let g = s3();
        let bg = Arc::new(FiniteGroupoid::classifying(&g));
        let id = GroupoidFunctor::identity(&bg);
        let refl = NaturalTransformation {
            source: id.clone(),
            target: id.clone(),
            component: vec![0],
        };
        assert!(check_natural_transformation(&refl));
        for x in g.elements() {
            // conjugation functor u -> x^-1 ; u ; x
            let arr_map = (0..6)
                .map(|u| bg.compose(bg.compose(bg.inverse(x as usize), u), x as usize))
                .collect();
            let conj = GroupoidFunctor::new(bg.clone(), bg.clone(), vec![0], arr_map).unwrap();
            let nt = NaturalTransformation {
                source: id.clone(),
                target: conj,
                component: vec![x as usize],
            };
            assert!(check_natural_transformation(&nt));
        }
        // a non-central component on id => id breaks a square
        let bad = NaturalTransformation {
            source: id.clone(),
            target: id,
            component: vec![g.generators()[0] as usize],
        };
        assert!(!check_natural_transformation(&bad));
    }

    #[test]
    fn functor_enumeration_counts() {
        let z2 = Arc::new(FiniteGroupoid::classifying(&FiniteGroup::cyclic(2)));
        let bs3 = Arc::new(FiniteGroupoid::classifying(&s3()));
        // Hom(Z2, S3) has 4 elements
        assert_eq!(enumerate_functors(&z2, &bs3, usize::MAX).len(), 4);
        // swap groupoid into itself: objects map anywhere in the single class,
        // so |obj a| * |Hom(a, -)| = 2 * 2 choices
        let swap = Arc::new(z2_swap());
        let fs = enumerate_functors(&swap, &swap, usize::MAX);
        assert_eq!(fs.len(), 4);
        for f in fs {
            GroupoidFunctor::new(f.domain, f.codomain, f.obj_map, f.arr_map).unwrap();
        }
    }

    #[test]
    fn empty_groupoid_is_legal() {
        let e = FiniteGroupoid::empty();
        assert!(validate_groupoid(&e.to_data()).is_ok());
        assert!(e.pi0().is_empty());
        assert!(e.coarse_space().is_empty());
    }
}
