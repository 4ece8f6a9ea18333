//! One function per subcommand. Each formats its result as text, a
//! canonical document (`--json`) or DOT (`--dot`).

use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use stacklab::constructions::{double_coset_fiber_product, fiber_product, inertia};
use stacklab::covering::{
    covering_from_action, enumerate_actions, monodromy, uniformize, Pi1Action,
};
use stacklab::formats::{self, ActionDoc, CoverDoc, Document, Report};
use stacklab::gog::{
    bass_serre_ball, coarse_graph, inertia_gog, pi1_presentation, reduce_word, syllable_length,
    write_gog, GraphOfGroups, Pi1Presentation, Word,
};
use stacklab::groupoid::FiniteGroupoid;
use stacklab::morita::{morita_equivalent, skeleton};
use stacklab::selftest;
use stacklab::Error;

use crate::input::{self, CliError, CliResult};
use crate::{Command, Options, Output};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Dot,
}

fn format(opts: &Options, name: &str, dot: bool) -> CliResult<Format> {
    if opts.dot && !dot {
        return Err(CliError::Usage(format!("`{name}` has no DOT output")));
    }
    Ok(if opts.json {
        Format::Json
    } else if opts.dot {
        Format::Dot
    } else {
        Format::Text
    })
}

fn report(r: Report) -> String {
    formats::serialize(&Document::Report(r))
}

pub fn run(cmd: &Command, opts: &Options) -> CliResult<Output> {
    match cmd {
        Command::Validate { file } => validate(file, opts),
        Command::Skeleton { groupoid } => skeleton_cmd(groupoid, opts),
        Command::MoritaCheck { left, right } => morita_check(left, right, opts),
        Command::FiberProduct { left, right } => fiber_product_cmd(left, right, opts),
        Command::Inertia { input } => inertia_cmd(input, opts),
        Command::DoubleCosets { left, right } => double_cosets(left, right, opts),
        Command::Pi1 { gog, basepoint } => pi1(gog, basepoint.as_deref(), opts),
        Command::Reduce { gog, word, path } => reduce(gog, word, *path, opts),
        Command::Ball { gog, radius } => ball(gog, *radius, opts),
        Command::InertiaGog { gog } => inertia_gog_cmd(gog, opts),
        Command::Uniformize { gog, max_degree } => uniformize_cmd(gog, *max_degree, opts),
        Command::Cover { gog, action } => cover(gog, action, opts),
        Command::Monodromy { cover } => monodromy_cmd(cover, opts),
        Command::Enumerate { gog, degree } => enumerate(gog, *degree, opts),
        Command::ExportDot { file } => export_dot(file),
        Command::Selftest { quick } => selftest_cmd(*quick, opts),
    }
}

/// Errors that say the input is well-formed but fails an axiom.
fn is_validation_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::Validation { .. }
            | Error::InvalidGroup { .. }
            | Error::InvalidGroupoid(_)
            | Error::NotAHomomorphism(_)
            | Error::NotAFunctor(_)
            | Error::NotAnAction(_)
            | Error::InvalidAction(_)
            | Error::NonInjectiveInclusion { .. }
            | Error::InvalidGraph(_)
            | Error::DisconnectedGraph(_)
    )
}

fn validate(path: &Path, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "validate", false)?;
    match input::try_load(path)? {
        Ok(doc) => {
            let kind = doc.kind().as_str();
            Ok(Output::new(match fmt {
                Format::Json => report(
                    Report::new()
                        .with("valid", json!(true))
                        .with("document", json!(kind)),
                ),
                _ => format!("valid {kind}\n"),
            }))
        }
        Err(e) if is_validation_failure(&e) => {
            let text = match fmt {
                Format::Json => report(
                    Report::new()
                        .with("valid", json!(false))
                        .with("reason", json!(e.to_string())),
                ),
                _ => format!("invalid: {e}\n"),
            };
            Ok(Output::new(text).verdict(false))
        }
        Err(source) => Err(CliError::Input {
            path: path.to_path_buf(),
            source,
        }),
    }
}

/// Object, arrow and component counts with isotropy orders.
fn describe_groupoid(g: &FiniteGroupoid) -> String {
    let comps = g.pi0();
    let mut out = format!(
        "objects {}\narrows {}\ncomponents {}\n",
        g.object_count(),
        g.arrow_count(),
        comps.len()
    );
    for c in &comps {
        let iso = g.isotropy(c[0]).expect("objects of a component exist");
        let names: Vec<&str> = c.iter().map(|&x| g.object_name(x)).collect();
        let _ = writeln!(
            out,
            "  [{}] isotropy order {}",
            names.join(" "),
            iso.group.order()
        );
    }
    out
}

fn groupoid_output(g: &FiniteGroupoid, fmt: Format) -> String {
    match fmt {
        Format::Text => describe_groupoid(g),
        Format::Json => formats::serialize(&Document::Groupoid(g.clone())),
        Format::Dot => formats::groupoid_dot(g),
    }
}

fn skeleton_cmd(path: &Path, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "skeleton", true)?;
    let g = Arc::new(input::groupoid(path)?);
    let sk = skeleton(&g);
    Ok(Output::new(groupoid_output(&sk.groupoid, fmt)))
}

fn morita_check(left: &Path, right: &Path, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "morita-check", false)?;
    let g = input::groupoid(left)?;
    let h = input::groupoid(right)?;
    let witness = morita_equivalent(&g, &h)?;
    let text = match (&witness, fmt) {
        (Some(w), Format::Json) => {
            let matching: Vec<Value> = w
                .matching
                .iter()
                .zip(&w.isomorphisms)
                .map(|(&(x, y), iso)| {
                    json!({"left": g.object_name(x), "right": h.object_name(y), "isomorphism": iso.images()})
                })
                .collect();
            report(
                Report::new()
                    .with("equivalent", json!(true))
                    .with("matching", json!(matching)),
            )
        }
        (None, Format::Json) => report(Report::new().with("equivalent", json!(false))),
        (Some(w), _) => {
            let mut out = String::from("equivalent\n");
            for (&(x, y), iso) in w.matching.iter().zip(&w.isomorphisms) {
                let _ = writeln!(
                    out,
                    "  {} ~ {} isotropy order {} via {:?}",
                    g.object_name(x),
                    h.object_name(y),
                    iso.domain.order(),
                    iso.images()
                );
            }
            out
        }
        (None, _) => "not equivalent\n".to_string(),
    };
    Ok(Output::new(text).verdict(witness.is_some()))
}

fn fiber_product_cmd(left: &Path, right: &Path, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "fiber-product", true)?;
    let f = input::functor(left)?;
    let g = input::functor(right)?;
    let fp = fiber_product(&f, &g)?;
    Ok(Output::new(groupoid_output(&fp.total, fmt)))
}

fn inertia_cmd(path: &Path, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "inertia", true)?;
    let g = Arc::new(input::groupoid(path)?);
    Ok(Output::new(groupoid_output(&inertia(&g).groupoid, fmt)))
}

fn double_cosets(left: &Path, right: &Path, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "double-cosets", false)?;
    let f = input::hom(left)?;
    let g = input::hom(right)?;
    let d = double_coset_fiber_product(&f, &g)?;
    let text = match fmt {
        Format::Json => {
            let cosets: Vec<Value> = d
                .cosets
                .iter()
                .map(|c| {
                    json!({
                        "representative": c.representative,
                        "elements": c.elements,
                        "stabilizer_order": c.stabilizer.group.order(),
                    })
                })
                .collect();
            report(Report::new().with("cosets", json!(cosets)))
        }
        _ => {
            let mut out = format!("double cosets {}\n", d.cosets.len());
            for c in &d.cosets {
                let _ = writeln!(
                    out,
                    "  representative {} size {} stabilizer order {}",
                    c.representative,
                    c.elements.len(),
                    c.stabilizer.group.order()
                );
            }
            out
        }
    };
    Ok(Output::new(text))
}

fn presentation(g: &GraphOfGroups) -> CliResult<Arc<Pi1Presentation>> {
    Ok(Arc::new(pi1_presentation(g, g.basepoint())?))
}

fn pi1(path: &Path, basepoint: Option<&str>, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "pi1", false)?;
    let g = input::gog(path)?;
    let base = match basepoint {
        Some(name) => g
            .vertex_id(name)
            .ok_or_else(|| CliError::Usage(format!("no vertex `{name}`")))?,
        None => g.basepoint(),
    };
    let p = pi1_presentation(&g, base)?;
    let ab = p.abelianization();
    let text = match fmt {
        Format::Json => {
            let rels: Vec<String> = p.relators.iter().map(|r| p.format_word(r)).collect();
            report(
                Report::new()
                    .with("basepoint", json!(g.vertex(base).name))
                    .with("generators", json!(p.symbols))
                    .with("relators", json!(rels))
                    .with(
                        "abelianization",
                        json!({"free_rank": ab.free_rank, "torsion": ab.torsion}),
                    ),
            )
        }
        _ => format!("{p}\nabelianization {ab}\n"),
    };
    Ok(Output::new(text))
}

fn reduce(path: &Path, text: &str, as_path: bool, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "reduce", false)?;
    let g = input::gog(path)?;
    let (r, shown) = if as_path {
        let r = reduce_word(&g, g.tables(), &Word::parse(&g, text)?)?;
        let shown = r.to_word(&g).display(&g).to_string();
        (r, shown)
    } else {
        let p = presentation(&g)?;
        let r = reduce_word(&g, g.tables(), &p.word_to_loop(&g, &p.parse_word(text)?))?;
        let shown = p.format_word(&p.reduced_to_word(&g, &r)?);
        (r, shown)
    };
    let out = match fmt {
        Format::Json => report(
            Report::new()
                .with("input", json!(text))
                .with("reduced", json!(shown))
                .with("identity", json!(r.is_identity()))
                .with("syllable_length", json!(syllable_length(&r))),
        ),
        _ => format!("{shown}\n"),
    };
    Ok(Output::new(out))
}

fn ball(path: &Path, radius: usize, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "ball", true)?;
    let g = input::gog(path)?;
    let b = bass_serre_ball(&g, g.basepoint(), radius)?;
    let mut per_depth = vec![0usize; radius + 1];
    for v in &b.vertices {
        per_depth[v.depth] += 1;
    }
    let text = match fmt {
        Format::Dot => formats::tree_ball_dot(&g, &b),
        Format::Json => report(
            Report::new()
                .with("radius", json!(radius))
                .with("vertices", json!(b.vertices.len()))
                .with("edges", json!(b.edges.len()))
                .with("per_depth", json!(per_depth)),
        ),
        Format::Text => {
            let mut out = format!(
                "radius {radius}\nvertices {}\nedges {}\n",
                b.vertices.len(),
                b.edges.len()
            );
            for (d, n) in per_depth.iter().enumerate() {
                let _ = writeln!(out, "  depth {d}: {n}");
            }
            out
        }
    };
    Ok(Output::new(text))
}

fn inertia_gog_cmd(path: &Path, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "inertia-gog", true)?;
    let g = input::gog(path)?;
    let ig = inertia_gog(&g)?;
    Ok(Output::new(match fmt {
        Format::Text => write_gog(&ig),
        Format::Json => formats::serialize(&Document::Gog(ig)),
        Format::Dot => formats::coarse_graph_dot(&coarse_graph(&ig)),
    }))
}

fn action_line(a: &Pi1Action) -> String {
    a.presentation
        .symbols
        .iter()
        .zip(&a.images)
        .map(|(s, p)| format!("{s}={p}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn uniformize_cmd(path: &Path, max_degree: usize, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "uniformize", false)?;
    let g = Arc::new(input::gog(path)?);
    let u = uniformize(&g, max_degree)?;
    let good = u.certificate.passed();
    let text = match fmt {
        Format::Json => {
            let checks: Vec<Value> = u
                .certificate
                .vertices
                .iter()
                .map(|v| json!({"vertex": v.vertex, "checked": v.checked}))
                .collect();
            let cover = u.torsion_free_cover.as_ref().map(|a| {
                let doc = ActionDoc::from_action(a);
                let images: serde_json::Map<String, Value> = doc
                    .images
                    .iter()
                    .map(|(s, p)| (s.clone(), json!(p.to_string())))
                    .collect();
                json!({"degree": a.degree, "images": images})
            });
            report(
                Report::new()
                    .with("injective", json!(good))
                    .with("checks", json!(checks))
                    .with(
                        "counterexample",
                        json!(u
                            .certificate
                            .counterexample
                            .as_ref()
                            .map(|(v, x)| json!({"vertex": v, "element": x}))),
                    )
                    .with("searched_degree", json!(u.searched_degree))
                    .with("torsion_free_cover", json!(cover)),
            )
        }
        _ => {
            let mut out = String::new();
            for v in &u.certificate.vertices {
                let _ = writeln!(out, "vertex {}: {} elements inject", v.vertex, v.checked);
            }
            match &u.certificate.counterexample {
                None => out.push_str("injective\n"),
                Some((v, x)) => {
                    let _ = writeln!(out, "not injective: element {x} of `{v}` is trivial");
                }
            }
            match &u.torsion_free_cover {
                Some(a) => {
                    let _ = writeln!(
                        out,
                        "torsion-free cover of degree {}: {}",
                        a.degree,
                        action_line(a)
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "no torsion-free cover of degree at most {}",
                        u.searched_degree
                    );
                }
            }
            out
        }
    };
    Ok(Output::new(text).verdict(good))
}

fn cover_text(doc: &CoverDoc) -> String {
    let mut out = format!(
        "degree {}\neuler characteristic {}\n",
        doc.degree, doc.euler_characteristic
    );
    for (i, v) in doc.total.vertices().iter().enumerate() {
        let orbit: Vec<String> = doc.vertex_orbits[i]
            .iter()
            .map(|p| (p + 1).to_string())
            .collect();
        let _ = writeln!(
            out,
            "  vertex {} over {} group order {} orbit [{}]",
            v.name,
            doc.vertex_over[i],
            v.group.order(),
            orbit.join(" ")
        );
    }
    for (i, e) in doc.total.edges().iter().enumerate() {
        let _ = writeln!(
            out,
            "  edge {} over {} group order {} from {} to {}",
            e.name,
            doc.edge_over[i],
            e.group.order(),
            doc.total.vertex(e.src).name,
            doc.total.vertex(e.tgt).name
        );
    }
    out
}

fn cover(gog: &Path, action: &Path, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "cover", true)?;
    let g = Arc::new(input::gog(gog)?);
    let a = input::action(action)?.to_action(&presentation(&g)?)?;
    let doc = CoverDoc::from_cover(&covering_from_action(&g, &a)?);
    Ok(Output::new(match fmt {
        Format::Text => cover_text(&doc),
        Format::Json => formats::serialize(&Document::Cover(doc)),
        Format::Dot => formats::cover_dot(&doc),
    }))
}

fn monodromy_cmd(path: &Path, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "monodromy", false)?;
    let c = input::cover(path)?.to_covering()?;
    let a = monodromy(&c)?;
    Ok(Output::new(match fmt {
        Format::Json => formats::serialize(&Document::Action(ActionDoc::from_action(&a))),
        _ => format!("degree {}\n{}\n", a.degree, action_line(&a)),
    }))
}

fn enumerate(path: &Path, degree: usize, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "enumerate", false)?;
    let g = input::gog(path)?;
    let actions = enumerate_actions(&presentation(&g)?, degree)?;
    Ok(Output::new(match fmt {
        Format::Json => {
            let list: Vec<Value> = actions
                .iter()
                .map(|a| {
                    let images: serde_json::Map<String, Value> = a
                        .presentation
                        .symbols
                        .iter()
                        .zip(&a.images)
                        .map(|(s, p)| (s.clone(), json!(p.to_string())))
                        .collect();
                    json!({"degree": a.degree, "images": images})
                })
                .collect();
            report(
                Report::new()
                    .with("max_degree", json!(degree))
                    .with("actions", json!(list)),
            )
        }
        _ => {
            let mut out = format!(
                "transitive actions of degree at most {degree}: {}\n",
                actions.len()
            );
            for a in &actions {
                let _ = writeln!(out, "  degree {}: {}", a.degree, action_line(a));
            }
            out
        }
    }))
}

fn export_dot(path: &Path) -> CliResult<Output> {
    let doc = input::load(path)?;
    Ok(Output::new(formats::to_dot(&doc)?))
}

fn selftest_cmd(quick: bool, opts: &Options) -> CliResult<Output> {
    let fmt = format(opts, "selftest", false)?;
    let per_pair = if quick {
        selftest::FUNCTOR_SAMPLE
    } else {
        usize::MAX
    };
    let r = selftest::run_with(opts.seed, per_pair);
    let passed = r.passed();
    let text = match fmt {
        Format::Json => {
            let checks: Vec<Value> = r
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            report(
                Report::new()
                    .with("seed", json!(r.seed))
                    .with("passed", json!(passed))
                    .with("checks", json!(checks)),
            )
        }
        _ => {
            let mut out = format!("seed {}\n", r.seed);
            for c in &r.checks {
                let _ = writeln!(
                    out,
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            let failed = r.failures().count();
            let _ = writeln!(out, "{} checks, {} failed", r.checks.len(), failed);
            out
        }
    };
    Ok(Output::new(text)
        .verdict(passed)
        .note(format!("selftest seed {}", r.seed)))
}
