//! Canonical JSON documents and DOT export.
//!
//! Every document is a JSON object with a `kind` tag and a `version`. The
//! canonical text puts one top-level key per line in sorted order, each
//! value compact, with arrays in id order and rationals as `{num, den}`.
//! Parsing then serializing canonicalizes; serializing a parsed canonical
//! text reproduces it byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::Ratio;
use serde_json::{json, Map, Value};

use crate::covering::{CoveringGoG, Pi1Action};
use crate::error::{Error, Result};
use crate::gog::{CoarseGraph, EdgeSpec, GraphOfGroups, Pi1Presentation, TreeBall, VertexSpec};
use crate::group::{Elem, FiniteGroup, GroupHom};
use crate::groupoid::{FiniteGroupoid, GroupoidData, GroupoidFunctor, Violation};
use crate::perm::Perm;

pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Group,
    Groupoid,
    Gog,
    Action,
    Cover,
    Report,
    Functor,
    Hom,
}

impl Kind {
    pub const ALL: [Kind; 8] = [
        Kind::Group,
        Kind::Groupoid,
        Kind::Gog,
        Kind::Action,
        Kind::Cover,
        Kind::Report,
        Kind::Functor,
        Kind::Hom,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Group => "group",
            Kind::Groupoid => "groupoid",
            Kind::Gog => "gog",
            Kind::Action => "action",
            Kind::Cover => "cover",
            Kind::Report => "report",
            Kind::Functor => "functor",
            Kind::Hom => "hom",
        }
    }

    pub fn parse(s: &str) -> Result<Kind> {
        Kind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::UnsupportedKind(s.to_string()))
    }
}

/// A π₁-set as stored on disk: images keyed by generator symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDoc {
    pub degree: usize,
    pub images: BTreeMap<String, Perm>,
}

impl ActionDoc {
    pub fn from_action(a: &Pi1Action) -> Self {
        ActionDoc {
            degree: a.degree,
            images: a
                .presentation
                .symbols
                .iter()
                .cloned()
                .zip(a.images.iter().cloned())
                .collect(),
        }
    }

    /// Binds the images to a presentation; every generator must be given.
    pub fn to_action(&self, p: &Arc<Pi1Presentation>) -> Result<Pi1Action> {
        for s in self.images.keys() {
            if p.symbol_index(s).is_none() {
                return Err(Error::Validation {
                    location: format!("images.{s}"),
                    message: format!("no generator `{s}` in {p}"),
                });
            }
        }
        let images = p
            .symbols
            .iter()
            .map(|s| {
                self.images
                    .get(s)
                    .cloned()
                    .ok_or_else(|| Error::Validation {
                        location: "images".into(),
                        message: format!("missing image of generator `{s}`"),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        if p.generator_count() == 0 {
            let mut a = Pi1Action::trivial(Arc::clone(p));
            a.degree = self.degree;
            return Ok(a);
        }
        Pi1Action::new(Arc::clone(p), images)
    }
}

/// A cover as stored on disk: the total graph of groups with the maps
/// down to the base.
#[derive(Debug, Clone)]
pub struct CoverDoc {
    pub degree: usize,
    pub base: GraphOfGroups,
    pub total: GraphOfGroups,
    /// Base vertex name under each covering vertex.
    pub vertex_over: Vec<String>,
    /// Base edge name under each covering edge.
    pub edge_over: Vec<String>,
    /// Fiber points (0-based) lying under each covering vertex.
    pub vertex_orbits: Vec<Vec<usize>>,
    /// Base-group ids of each covering vertex group.
    pub vertex_subgroups: Vec<Vec<Elem>>,
    /// Base-group ids of each covering edge group.
    pub edge_subgroups: Vec<Vec<Elem>>,
    /// Conjugating elements `(x_src, x_tgt)` of each covering edge.
    pub edge_twists: Vec<(Elem, Elem)>,
    pub euler_characteristic: Ratio<i64>,
}

impl CoverDoc {
    pub fn from_cover(c: &CoveringGoG) -> Self {
        CoverDoc {
            degree: c.degree,
            base: (*c.base).clone(),
            total: c.total.clone(),
            vertex_over: c
                .vertex_over
                .iter()
                .map(|&v| c.base.vertex(v).name.clone())
                .collect(),
            edge_over: c
                .edge_over
                .iter()
                .map(|&e| c.base.edge(e).name.clone())
                .collect(),
            vertex_orbits: c.vertex_orbits.clone(),
            vertex_subgroups: c
                .vertex_groups
                .iter()
                .map(|s| s.embedding.clone())
                .collect(),
            edge_subgroups: c.edge_groups.iter().map(|s| s.embedding.clone()).collect(),
            edge_twists: c.edge_twist.clone(),
            euler_characteristic: c.total.euler_characteristic(),
        }
    }

    /// Rebuilds the cover, checking the stored data against the total graph.
    pub fn to_covering(&self) -> Result<CoveringGoG> {
        let vertex_over = self
            .vertex_over
            .iter()
            .map(|n| {
                self.base
                    .vertex_id(n)
                    .ok_or_else(|| Error::InvalidGraph(format!("unknown base vertex `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        let edge_over = self
            .edge_over
            .iter()
            .map(|n| {
                self.base
                    .edge_id(n)
                    .ok_or_else(|| Error::InvalidGraph(format!("unknown base edge `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        CoveringGoG::from_parts(
            Arc::new(self.base.clone()),
            self.total.clone(),
            self.degree,
            vertex_over,
            edge_over,
            self.vertex_orbits.clone(),
            &self.vertex_subgroups,
            &self.edge_subgroups,
            self.edge_twists.clone(),
        )
    }
}

/// Free-form result record; keys other than `kind` and `version`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub fields: BTreeMap<String, Value>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.fields.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone)]
pub enum Document {
    Group(FiniteGroup),
    Groupoid(FiniteGroupoid),
    Gog(GraphOfGroups),
    Action(ActionDoc),
    Cover(CoverDoc),
    Report(Report),
    Functor(GroupoidFunctor),
    Hom(GroupHom),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Group(_) => Kind::Group,
            Document::Groupoid(_) => Kind::Groupoid,
            Document::Gog(_) => Kind::Gog,
            Document::Action(_) => Kind::Action,
            Document::Cover(_) => Kind::Cover,
            Document::Report(_) => Kind::Report,
            Document::Functor(_) => Kind::Functor,
            Document::Hom(_) => Kind::Hom,
        }
    }
}

pub fn rational_json(r: Ratio<i64>) -> Value {
    json!({"num": *r.numer(), "den": *r.denom()})
}

fn group_payload(g: &FiniteGroup, name: &str) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("name".into(), json!(name));
    m.insert("order".into(), json!(g.order()));
    if let Some(pg) = g.perm_gens() {
        m.insert("degree".into(), json!(pg.degree));
        m.insert(
            "generators".into(),
            Value::Array(pg.gens.iter().map(|p| json!(p.to_string())).collect()),
        );
    }
    if g.has_table() {
        let rows: Vec<Value> = g
            .elements()
            .map(|a| Value::Array(g.elements().map(|b| json!(g.mul(a, b))).collect()))
            .collect();
        m.insert("table".into(), Value::Array(rows));
    }
    m
}

fn groupoid_payload(g: &FiniteGroupoid) -> Map<String, Value> {
    let d = g.to_data();
    let mut m = Map::new();
    m.insert("objects".into(), json!(d.objects));
    m.insert(
        "arrows".into(),
        Value::Array(d.arrows.iter().map(|&(s, t)| json!([s, t])).collect()),
    );
    m.insert(
        "compose".into(),
        Value::Array(
            d.compose
                .iter()
                .map(|&(f, g, h)| json!([f, g, h]))
                .collect(),
        ),
    );
    m.insert("identities".into(), json!(d.identities));
    m
}

fn gog_payload(g: &GraphOfGroups) -> Map<String, Value> {
    let (vs, es) = g.specs();
    let mut m = Map::new();
    m.insert(
        "groups".into(),
        Value::Array(
            g.groups()
                .iter()
                .map(|(name, grp)| Value::Object(group_payload(grp, name)))
                .collect(),
        ),
    );
    m.insert(
        "vertices".into(),
        Value::Array(
            vs.iter()
                .map(|v| json!({"name": v.name, "group": v.group}))
                .collect(),
        ),
    );
    m.insert(
        "edges".into(),
        Value::Array(
            es.iter()
                .map(|e| {
                    json!({
                        "name": e.name,
                        "src": e.src,
                        "tgt": e.tgt,
                        "group": e.group,
                        "into_src": e.into_src,
                        "into_tgt": e.into_tgt,
                    })
                })
                .collect(),
        ),
    );
    m.insert("basepoint".into(), json!(g.vertex(g.basepoint()).name));
    m
}

fn action_payload(a: &ActionDoc) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("degree".into(), json!(a.degree));
    let images: Map<String, Value> = a
        .images
        .iter()
        .map(|(s, p)| {
            (
                s.clone(),
                Value::Array(p.images().iter().map(|&i| json!(i + 1)).collect()),
            )
        })
        .collect();
    m.insert("images".into(), Value::Object(images));
    m
}

fn payload(doc: &Document) -> Map<String, Value> {
    match doc {
        Document::Group(g) => group_payload(g, g.name()),
        Document::Groupoid(g) => groupoid_payload(g),
        Document::Gog(g) => gog_payload(g),
        Document::Action(a) => action_payload(a),
        Document::Cover(c) => {
            let mut m = Map::new();
            m.insert("degree".into(), json!(c.degree));
            m.insert("base".into(), Value::Object(gog_payload(&c.base)));
            m.insert("total".into(), Value::Object(gog_payload(&c.total)));
            m.insert("vertex_over".into(), json!(c.vertex_over));
            m.insert("edge_over".into(), json!(c.edge_over));
            let orbits: Vec<Vec<usize>> = c
                .vertex_orbits
                .iter()
                .map(|o| o.iter().map(|p| p + 1).collect())
                .collect();
            m.insert("vertex_orbits".into(), json!(orbits));
            m.insert("vertex_subgroups".into(), json!(c.vertex_subgroups));
            m.insert("edge_subgroups".into(), json!(c.edge_subgroups));
            let twists: Vec<[Elem; 2]> = c.edge_twists.iter().map(|&(a, b)| [a, b]).collect();
            m.insert("edge_twists".into(), json!(twists));
            m.insert(
                "euler_characteristic".into(),
                rational_json(c.euler_characteristic),
            );
            m
        }
        Document::Report(r) => r
            .fields
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect(),
        Document::Functor(f) => {
            let mut m = Map::new();
            m.insert("domain".into(), Value::Object(groupoid_payload(&f.domain)));
            m.insert(
                "codomain".into(),
                Value::Object(groupoid_payload(&f.codomain)),
            );
            m.insert("obj_map".into(), json!(f.obj_map));
            m.insert("arr_map".into(), json!(f.arr_map));
            m
        }
        Document::Hom(h) => {
            let mut m = Map::new();
            m.insert(
                "domain".into(),
                Value::Object(group_payload(&h.domain, h.domain.name())),
            );
            m.insert(
                "codomain".into(),
                Value::Object(group_payload(&h.codomain, h.codomain.name())),
            );
            m.insert("images".into(), json!(h.images()));
            m
        }
    }
}

/// Canonical text of a document, newline terminated.
pub fn serialize(doc: &Document) -> String {
    let mut m = payload(doc);
    m.insert("kind".into(), json!(doc.kind().as_str()));
    m.insert("version".into(), json!(FORMAT_VERSION));
    write_object(&m)
}

/// One sorted key per line, values compact.
pub fn write_object(m: &Map<String, Value>) -> String {
    let mut out = String::from("{");
    for (i, (k, v)) in m.iter().enumerate() {
        if i > 0 {
            out.push_str(",\n");
        }
        let _ = write!(out, "{}: {}", Value::String(k.clone()), v);
    }
    out.push_str("}\n");
    out
}

/// Canonical text of any JSON value holding an object at the top.
pub fn canonicalize(text: &str) -> Result<String> {
    match parse_json(text)? {
        Value::Object(m) => Ok(write_object(&m)),
        _ => Err(schema("$", "expected an object")),
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn schema(location: &str, message: impl Into<String>) -> Error {
    Error::Schema {
        location: location.to_string(),
        message: message.into(),
    }
}

fn validation(location: &str, e: Error) -> Error {
    Error::Validation {
        location: location.to_string(),
        message: e.to_string(),
    }
}

struct Obj<'a> {
    map: &'a Map<String, Value>,
    at: String,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, at: &str) -> Result<Self> {
        match v {
            Value::Object(map) => Ok(Obj {
                map,
                at: at.to_string(),
            }),
            _ => Err(schema(at, "expected an object")),
        }
    }

    fn path(&self, key: &str) -> String {
        if self.at == "$" {
            key.to_string()
        } else {
            format!("{}.{key}", self.at)
        }
    }

    fn get(&self, key: &str) -> Result<&'a Value> {
        self.map
            .get(key)
            .ok_or_else(|| schema(&self.at, format!("missing field `{key}`")))
    }

    fn str(&self, key: &str) -> Result<&'a str> {
        self.get(key)?
            .as_str()
            .ok_or_else(|| schema(&self.path(key), "expected a string"))
    }

    fn uint(&self, key: &str) -> Result<usize> {
        as_uint(self.get(key)?, &self.path(key))
    }

    fn int(&self, key: &str) -> Result<i64> {
        self.get(key)?
            .as_i64()
            .ok_or_else(|| schema(&self.path(key), "expected an integer"))
    }

    fn array(&self, key: &str) -> Result<&'a [Value]> {
        self.get(key)?
            .as_array()
            .map(|v| v.as_slice())
            .ok_or_else(|| schema(&self.path(key), "expected an array"))
    }

    fn obj(&self, key: &str) -> Result<Obj<'a>> {
        Obj::new(self.get(key)?, &self.path(key))
    }

    fn uints(&self, key: &str) -> Result<Vec<usize>> {
        let at = self.path(key);
        self.array(key)?
            .iter()
            .enumerate()
            .map(|(i, v)| as_uint(v, &format!("{at}[{i}]")))
            .collect()
    }

    fn strings(&self, key: &str) -> Result<Vec<String>> {
        let at = self.path(key);
        self.array(key)?
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| schema(&format!("{at}[{i}]"), "expected a string"))
            })
            .collect()
    }
}

fn as_uint(v: &Value, at: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(at, "expected a non-negative integer"))
}

fn uint_tuple(v: &Value, at: &str, len: usize) -> Result<Vec<usize>> {
    let a = v
        .as_array()
        .filter(|a| a.len() == len)
        .ok_or_else(|| schema(at, format!("expected an array of {len} integers")))?;
    a.iter()
        .enumerate()
        .map(|(i, x)| as_uint(x, &format!("{at}[{i}]")))
        .collect()
}

fn parse_group(o: &Obj) -> Result<FiniteGroup> {
    let name = o.str("name")?;
    let order = o.uint("order")?;
    let table = match o.map.get("table") {
        None => None,
        Some(_) => {
            let rows = o.array("table")?;
            let at = o.path("table");
            if rows.len() != order {
                return Err(schema(&at, format!("expected {order} rows")));
            }
            let mut mul = Vec::with_capacity(order * order);
            for (i, row) in rows.iter().enumerate() {
                for x in uint_tuple(row, &format!("{at}[{i}]"), order)? {
                    mul.push(x as Elem);
                }
            }
            Some(mul)
        }
    };
    let g = if o.map.contains_key("generators") {
        let degree = o.uint("degree")?;
        let at = o.path("generators");
        let gens = o
            .strings("generators")?
            .iter()
            .enumerate()
            .map(|(i, s)| {
                Perm::parse_cycles(s, degree)
                    .map_err(|e| schema(&format!("{at}[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let g =
            FiniteGroup::from_perm_gens(name, degree, gens).map_err(|e| validation(&o.at, e))?;
        if let Some(mul) = &table {
            if g.table() != Some(mul.as_slice()) {
                return Err(Error::Validation {
                    location: o.path("table"),
                    message: "table disagrees with the generators".into(),
                });
            }
        }
        g
    } else {
        let mul = table.ok_or_else(|| schema(&o.at, "missing field `table` or `generators`"))?;
        FiniteGroup::from_table(name, order, mul).map_err(|e| validation(&o.at, e))?
    };
    if g.order() != order {
        return Err(Error::Validation {
            location: o.path("order"),
            message: format!("generators give order {}, not {order}", g.order()),
        });
    }
    Ok(g)
}

fn parse_groupoid(o: &Obj) -> Result<FiniteGroupoid> {
    let objects = o.strings("objects")?;
    let n = objects.len();
    let at = o.path("arrows");
    let mut arrows = Vec::new();
    for (i, v) in o.array("arrows")?.iter().enumerate() {
        let st = uint_tuple(v, &format!("{at}[{i}]"), 2)?;
        for (end, &x) in ["src", "tgt"].iter().zip(&st) {
            if x >= n {
                return Err(schema(
                    &format!("{at}[{i}]"),
                    format!("arrow {i} has dangling {end} id {x}"),
                ));
            }
        }
        arrows.push((st[0], st[1]));
    }
    let at = o.path("compose");
    let compose = o
        .array("compose")?
        .iter()
        .enumerate()
        .map(|(i, v)| uint_tuple(v, &format!("{at}[{i}]"), 3).map(|t| (t[0], t[1], t[2])))
        .collect::<Result<Vec<_>>>()?;
    let identities = o.uints("identities")?;
    let data = GroupoidData {
        objects,
        arrows,
        compose,
        identities,
    };
    FiniteGroupoid::from_data(data).map_err(|e| match e {
        Error::InvalidGroupoid(r) => {
            let location = match r.violations.first() {
                Some(Violation::DanglingArrow { .. }) => o.path("compose"),
                Some(Violation::MissingIdentity { .. }) => o.path("identities"),
                _ => o.at.clone(),
            };
            Error::Validation {
                location,
                message: r.to_string(),
            }
        }
        e => validation(&o.at, e),
    })
}

fn parse_gog(o: &Obj) -> Result<GraphOfGroups> {
    let at = o.path("groups");
    let groups = o
        .array("groups")?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let go = Obj::new(v, &format!("{at}[{i}]"))?;
            Ok((go.str("name")?.to_string(), Arc::new(parse_group(&go)?)))
        })
        .collect::<Result<Vec<_>>>()?;
    let at = o.path("vertices");
    let vertices = o
        .array("vertices")?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let vo = Obj::new(v, &format!("{at}[{i}]"))?;
            Ok(VertexSpec {
                name: vo.str("name")?.to_string(),
                group: vo.str("group")?.to_string(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let at = o.path("edges");
    let edges = o
        .array("edges")?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let eo = Obj::new(v, &format!("{at}[{i}]"))?;
            let elems = |k: &str| -> Result<Vec<Elem>> {
                Ok(eo.uints(k)?.into_iter().map(|x| x as Elem).collect())
            };
            Ok(EdgeSpec {
                name: eo.str("name")?.to_string(),
                src: eo.str("src")?.to_string(),
                tgt: eo.str("tgt")?.to_string(),
                group: eo.str("group")?.to_string(),
                into_src: elems("into_src")?,
                into_tgt: elems("into_tgt")?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let basepoint = o.str("basepoint")?;
    GraphOfGroups::new(groups, vertices, edges, Some(basepoint)).map_err(|e| validation(&o.at, e))
}

fn parse_action(o: &Obj) -> Result<ActionDoc> {
    let degree = o.uint("degree")?;
    if degree == 0 {
        return Err(schema(&o.path("degree"), "degree must be positive"));
    }
    let images_obj = o.obj("images")?;
    let mut images = BTreeMap::new();
    for (s, v) in images_obj.map {
        let at = images_obj.path(s);
        let pts = v
            .as_array()
            .ok_or_else(|| schema(&at, "expected an array of points"))?
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let p = as_uint(x, &format!("{at}[{i}]"))?;
                if p == 0 || p > degree {
                    return Err(schema(
                        &format!("{at}[{i}]"),
                        format!("point {p} outside 1..={degree}"),
                    ));
                }
                Ok((p - 1) as u32)
            })
            .collect::<Result<Vec<_>>>()?;
        if pts.len() != degree {
            return Err(schema(&at, format!("expected {degree} points")));
        }
        let p = Perm::from_images(pts).map_err(|e| validation(&at, e))?;
        images.insert(s.clone(), p);
    }
    Ok(ActionDoc { degree, images })
}

fn parse_cover(o: &Obj) -> Result<CoverDoc> {
    let base = parse_gog(&o.obj("base")?)?;
    let total = parse_gog(&o.obj("total")?)?;
    let vertex_over = o.strings("vertex_over")?;
    let edge_over = o.strings("edge_over")?;
    if vertex_over.len() != total.vertices().len() || edge_over.len() != total.edges().len() {
        return Err(Error::Validation {
            location: o.at.clone(),
            message: "maps to the base do not cover every vertex and edge".into(),
        });
    }
    for (i, v) in vertex_over.iter().enumerate() {
        if base.vertex_id(v).is_none() {
            return Err(schema(
                &format!("vertex_over[{i}]"),
                format!("unknown base vertex `{v}`"),
            ));
        }
    }
    for (i, e) in edge_over.iter().enumerate() {
        if base.edge_id(e).is_none() {
            return Err(schema(
                &format!("edge_over[{i}]"),
                format!("unknown base edge `{e}`"),
            ));
        }
    }
    let chi = o.obj("euler_characteristic")?;
    let (num, den) = (chi.int("num")?, chi.int("den")?);
    if den <= 0 {
        return Err(schema(&chi.path("den"), "denominator must be positive"));
    }
    let euler_characteristic = Ratio::new(num, den);
    if *euler_characteristic.denom() != den || euler_characteristic != total.euler_characteristic()
    {
        return Err(Error::Validation {
            location: o.path("euler_characteristic"),
            message: format!("expected {}", total.euler_characteristic()),
        });
    }
    let degree = o.uint("degree")?;
    let nested = |key: &str| -> Result<Vec<Vec<usize>>> {
        let at = o.path(key);
        o.array(key)?
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let at = format!("{at}[{i}]");
                v.as_array()
                    .ok_or_else(|| schema(&at, "expected an array"))?
                    .iter()
                    .enumerate()
                    .map(|(j, x)| as_uint(x, &format!("{at}[{j}]")))
                    .collect()
            })
            .collect()
    };
    let mut vertex_orbits = nested("vertex_orbits")?;
    for (i, orbit) in vertex_orbits.iter_mut().enumerate() {
        for (j, p) in orbit.iter_mut().enumerate() {
            if *p == 0 || *p > degree {
                return Err(schema(
                    &format!("vertex_orbits[{i}][{j}]"),
                    format!("point {p} outside 1..={degree}"),
                ));
            }
            *p -= 1;
        }
    }
    let elems = |v: Vec<Vec<usize>>| -> Vec<Vec<Elem>> {
        v.into_iter()
            .map(|s| s.into_iter().map(|x| x as Elem).collect())
            .collect()
    };
    let vertex_subgroups = elems(nested("vertex_subgroups")?);
    let edge_subgroups = elems(nested("edge_subgroups")?);
    let edge_twists = o
        .array("edge_twists")?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            uint_tuple(v, &format!("edge_twists[{i}]"), 2).map(|t| (t[0] as Elem, t[1] as Elem))
        })
        .collect::<Result<Vec<_>>>()?;
    let doc = CoverDoc {
        degree,
        base,
        total,
        vertex_over,
        edge_over,
        vertex_orbits,
        vertex_subgroups,
        edge_subgroups,
        edge_twists,
        euler_characteristic,
    };
    doc.to_covering().map_err(|e| validation(&o.at, e))?;
    Ok(doc)
}

/// Parses and validates a document, checking its kind when one is expected.
pub fn parse(text: &str, expected: Option<Kind>) -> Result<Document> {
    let v = parse_json(text)?;
    let o = Obj::new(&v, "$")?;
    let kind = Kind::parse(o.str("kind")?)?;
    if let Some(k) = expected {
        if k != kind {
            return Err(schema(
                "kind",
                format!("expected `{}`, found `{}`", k.as_str(), kind.as_str()),
            ));
        }
    }
    let version = o.uint("version")? as u64;
    if version != FORMAT_VERSION {
        return Err(schema("version", format!("unsupported version {version}")));
    }
    Ok(match kind {
        Kind::Group => Document::Group(parse_group(&o)?),
        Kind::Groupoid => Document::Groupoid(parse_groupoid(&o)?),
        Kind::Gog => Document::Gog(parse_gog(&o)?),
        Kind::Action => Document::Action(parse_action(&o)?),
        Kind::Cover => Document::Cover(parse_cover(&o)?),
        Kind::Report => Document::Report(Report {
            fields: o
                .map
                .iter()
                .filter(|(k, _)| *k != "kind" && *k != "version")
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }),
        Kind::Functor => {
            let domain = Arc::new(parse_groupoid(&o.obj("domain")?)?);
            let codomain = Arc::new(parse_groupoid(&o.obj("codomain")?)?);
            let f =
                GroupoidFunctor::new(domain, codomain, o.uints("obj_map")?, o.uints("arr_map")?)
                    .map_err(|e| validation("$", e))?;
            Document::Functor(f)
        }
        Kind::Hom => {
            let domain = Arc::new(parse_group(&o.obj("domain")?)?);
            let codomain = Arc::new(parse_group(&o.obj("codomain")?)?);
            let images = o.uints("images")?.into_iter().map(|x| x as Elem).collect();
            Document::Hom(
                GroupHom::new(domain, codomain, images).map_err(|e| validation("images", e))?,
            )
        }
    })
}

pub fn parse_groupoid_text(text: &str) -> Result<FiniteGroupoid> {
    match parse(text, Some(Kind::Groupoid))? {
        Document::Groupoid(g) => Ok(g),
        _ => unreachable!("kind checked"),
    }
}

pub fn parse_gog_text(text: &str) -> Result<GraphOfGroups> {
    match parse(text, Some(Kind::Gog))? {
        Document::Gog(g) => Ok(g),
        _ => unreachable!("kind checked"),
    }
}

pub fn parse_action_text(text: &str) -> Result<ActionDoc> {
    match parse(text, Some(Kind::Action))? {
        Document::Action(a) => Ok(a),
        _ => unreachable!("kind checked"),
    }
}

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// One node per object labelled with its isotropy order, one edge per
/// connected pair of distinct objects labelled with the hom-set size.
pub fn groupoid_dot(g: &FiniteGroupoid) -> String {
    let mut out = String::from("digraph groupoid {\n");
    for x in 0..g.object_count() {
        let iso = g.hom(x, x).len();
        let _ = writeln!(
            out,
            "  n{x} [label={}];",
            quote(&format!("{} |G|={iso}", g.object_name(x)))
        );
    }
    for x in 0..g.object_count() {
        for y in x + 1..g.object_count() {
            let k = g.hom(x, y).len();
            if k > 0 {
                let _ = writeln!(out, "  n{x} -> n{y} [dir=both, label=\"{k}\"];");
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn coarse_graph_dot(c: &CoarseGraph) -> String {
    let mut out = String::from("digraph gog {\n");
    for (i, (name, order)) in c.vertices.iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{i} [label={}];",
            quote(&format!("{name} |G|={order}"))
        );
    }
    for (name, s, t, order) in &c.edges {
        let _ = writeln!(
            out,
            "  n{s} -> n{t} [label={}];",
            quote(&format!("{name} |G|={order}"))
        );
    }
    out.push_str("}\n");
    out
}

/// Ball vertices labelled with the vertex they lie over and its group order.
pub fn tree_ball_dot(g: &GraphOfGroups, b: &TreeBall) -> String {
    let mut out = String::from("digraph ball {\n");
    for (i, v) in b.vertices.iter().enumerate() {
        let vx = g.vertex(v.orbit);
        let _ = writeln!(
            out,
            "  n{i} [label={}];",
            quote(&format!(
                "{} |G|={} d={}",
                vx.name,
                vx.group.order(),
                v.depth
            ))
        );
    }
    for &(p, c, d) in &b.edges {
        let e = g.edge(d.edge);
        let sign = if d.forward { "+" } else { "-" };
        let _ = writeln!(
            out,
            "  n{p} -> n{c} [label={}];",
            quote(&format!("{}{sign}", e.name))
        );
    }
    out.push_str("}\n");
    out
}

pub fn cover_dot(c: &CoverDoc) -> String {
    let mut out = String::from("digraph cover {\n");
    for (i, v) in c.total.vertices().iter().enumerate() {
        let _ = writeln!(
            out,
            "  n{i} [label={}];",
            quote(&format!(
                "{} |G|={} over {}",
                v.name,
                v.group.order(),
                c.vertex_over[i]
            ))
        );
    }
    for e in c.total.edges() {
        let _ = writeln!(
            out,
            "  n{} -> n{} [label={}];",
            e.src,
            e.tgt,
            quote(&format!("{} |G|={}", e.name, e.group.order()))
        );
    }
    out.push_str("}\n");
    out
}

/// DOT for groupoids, graphs of groups (their coarse graph) and covers.
pub fn to_dot(doc: &Document) -> Result<String> {
    match doc {
        Document::Groupoid(g) => Ok(groupoid_dot(g)),
        Document::Gog(g) => Ok(coarse_graph_dot(&crate::gog::coarse_graph(g))),
        Document::Cover(c) => Ok(cover_dot(c)),
        other => Err(Error::UnsupportedKind(other.kind().as_str().to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const UNIT: &str = "{\"arrows\": [[0,0]],\n\"compose\": [[0,0,0]],\n\"identities\": [0],\n\"kind\": \"groupoid\",\n\"objects\": [\"*\"],\n\"version\": 1}\n";

    #[test]
    fn unit_groupoid_golden() {
        let doc = Document::Groupoid(FiniteGroupoid::unit("*"));
        let text = serialize(&doc);
        assert_eq!(text, UNIT);
        assert_eq!(text.lines().count(), 6);
        let back = parse_groupoid_text(UNIT).unwrap();
        assert_eq!(back, FiniteGroupoid::unit("*"));
    }

    #[test]
    fn cyclic_table_is_row_major() {
        let text = serialize(&Document::Group(FiniteGroup::cyclic(6)));
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["table"][0], json!([0, 1, 2, 3, 4, 5]));
        assert_eq!(v["table"][1][5], json!(0));
        let Document::Group(g) = parse(&text, Some(Kind::Group)).unwrap() else {
            panic!("kind")
        };
        assert!(g.same_law(&FiniteGroup::cyclic(6)));
    }

    #[test]
    fn stored_cover_rebuilds_with_same_monodromy() {
        use crate::covering::{covering_from_action, monodromy};
        let g = Arc::new(GraphOfGroups::cyclic_segment(2, 3, 1).unwrap());
        let p = Arc::new(crate::gog::pi1_presentation(&g, g.basepoint()).unwrap());
        let a = Pi1Action::from_symbols(
            p,
            3,
            &[
                ("a", Perm::parse_cycles("(1 2)", 3).unwrap()),
                ("b", Perm::parse_cycles("(1 2 3)", 3).unwrap()),
            ],
        )
        .unwrap();
        let cover = covering_from_action(&g, &a).unwrap();
        let text = serialize(&Document::Cover(CoverDoc::from_cover(&cover)));
        let Document::Cover(doc) = parse(&text, Some(Kind::Cover)).unwrap() else {
            panic!("kind")
        };
        let back = monodromy(&doc.to_covering().unwrap()).unwrap();
        assert!(back.is_conjugate(&a));
        for (from, to) in [
            ("[[1,2],[3],[1,2,3]]", "[[1,2],[2],[1,2,3]]"),
            ("[[0],[0,1],[0]]", "[[0],[0],[0]]"),
        ] {
            let tampered = text.replace(from, to);
            assert_ne!(tampered, text);
            assert!(matches!(
                parse(&tampered, None),
                Err(Error::Validation { .. })
            ));
        }
    }

    #[test]
    fn rationals_are_exact() {
        let g = GraphOfGroups::cyclic_segment(2, 3, 1).unwrap();
        assert_eq!(
            rational_json(g.euler_characteristic()),
            json!({"num": -1, "den": 6})
        );
    }

    #[test]
    fn error_classes_are_distinct() {
        let cut = &UNIT[..UNIT.len() - 10];
        assert!(matches!(parse(cut, None), Err(Error::Syntax { .. })));
        let dangling = UNIT.replace("[[0,0]]", "[[0,3]]");
        match parse(&dangling, None) {
            Err(Error::Schema { location, message }) => {
                assert_eq!(location, "arrows[0]");
                assert!(message.contains("arrow 0"));
            }
            other => panic!("{other:?}"),
        }
        let bad = UNIT.replace("\"identities\": [0]", "\"identities\": [1]");
        assert!(matches!(parse(&bad, None), Err(Error::Validation { .. })));
        let future = UNIT.replace("\"version\": 1", "\"version\": 2");
        assert!(matches!(parse(&future, None), Err(Error::Schema { .. })));
        let unknown = UNIT.replace("\"groupoid\"", "\"sheaf\"");
        assert!(matches!(
            parse(&unknown, None),
            Err(Error::UnsupportedKind(_))
        ));
    }

    #[test]
    fn gog_round_trip_is_bit_exact() {
        let z4 = FiniteGroup::cyclic(4);
        let g =
            GraphOfGroups::hnn(z4.clone(), FiniteGroup::cyclic(2), vec![0, 2], vec![0, 2]).unwrap();
        let text = serialize(&Document::Gog(g));
        let again = serialize(&parse(&text, Some(Kind::Gog)).unwrap());
        assert_eq!(text, again);
        let s3 = GraphOfGroups::segment(
            FiniteGroup::symmetric(3),
            z4,
            FiniteGroup::trivial(),
            vec![0],
            vec![0],
        )
        .unwrap();
        let text = serialize(&Document::Gog(s3));
        assert_eq!(text, serialize(&parse(&text, None).unwrap()));
    }

    #[test]
    fn dot_examples() {
        let point = to_dot(&Document::Groupoid(FiniteGroupoid::unit("*"))).unwrap();
        assert_eq!(point.matches("label=").count(), 1);
        let seg = GraphOfGroups::cyclic_segment(2, 3, 1).unwrap();
        let dot = to_dot(&Document::Gog(seg.clone())).unwrap();
        assert_eq!(
            (dot.matches(" [label=").count(), dot.matches("->").count()),
            (3, 1)
        );
        let ball = crate::gog::bass_serre_ball(&seg, 0, 1).unwrap();
        assert_eq!(tree_ball_dot(&seg, &ball).matches("|G|=").count(), 3);
        assert!(matches!(
            to_dot(&Document::Report(Report::new())),
            Err(Error::UnsupportedKind(_))
        ));
    }
}
