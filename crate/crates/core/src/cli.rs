//! Batch front end: one JSON problem document in, one JSON report out.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::algebra::{parse_rational, Cyclotomic, MultiPoly};
use crate::boxspline::{eval_box, local_piece, ForwardModel, MultiplicityFunction};
use crate::dm::{Deconvolution, Deconvolver, VertexContribution};
use crate::lattice::{alcove_of, default_epsilon, vertex_set, TorusPoint, WeightList};
use crate::rep::{probe_window, verify_branching, BranchingOptions, EmbeddingSpec, RootDatum, Selection};
use crate::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFICATION_FAILED: u8 = 1;
pub const EXIT_SCHEMA: u8 = 2;
pub const EXIT_ENGINE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "boxdeconv", version, about = "Exact box-spline deconvolution engine")]
pub struct Args {
    /// Problem document; standard input when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Overrides the seed given in the document.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for per-point parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Extra lattice steps around the support window.
    #[arg(long)]
    pub window: Option<i64>,
}

#[derive(Debug)]
pub enum CliError {
    Schema(String),
    Engine { op: &'static str, source: Error },
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Schema(msg) => write!(f, "schema error: {msg}"),
            CliError::Engine { op, source } => write!(f, "engine error in {op}: {source}"),
        }
    }
}

fn engine(op: &'static str) -> impl FnOnce(Error) -> CliError {
    move |source| CliError::Engine { op, source }
}

/// An exact number: a JSON integer or a `"p/q"` string.
#[derive(Clone, Debug)]
struct Num(BigRational);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(Num(BigRational::from_integer(n.into()))),
            Raw::Str(s) => parse_rational(&s).map(Num).map_err(serde::de::Error::custom),
        }
    }
}

fn nums(v: &[Num]) -> Vec<BigRational> {
    v.iter().map(|n| n.0.clone()).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MEntry {
    point: Vec<Num>,
    value: Num,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RootDatumSpec {
    Named {
        #[serde(rename = "type")]
        name: String,
    },
    Cartan {
        cartan: Vec<Vec<i64>>,
        #[serde(default)]
        adjoint: bool,
    },
    Product {
        product: Vec<RootDatumSpec>,
    },
    Explicit(RootDatum),
}

impl RootDatumSpec {
    fn build(&self) -> std::result::Result<RootDatum, CliError> {
        let schema = |e: Error| CliError::Schema(e.to_string());
        match self {
            RootDatumSpec::Named { name } => match name.as_str() {
                "A1" => Ok(RootDatum::a1()),
                "A2" => Ok(RootDatum::a2()),
                "B2" => Ok(RootDatum::b2()),
                "C2" => Ok(RootDatum::c2()),
                "G2" => Ok(RootDatum::g2()),
                t if t.starts_with('T') => t[1..]
                    .parse::<usize>()
                    .map(RootDatum::torus)
                    .map_err(|_| CliError::Schema(format!("unknown root datum type {t:?}"))),
                other => Err(CliError::Schema(format!("unknown root datum type {other:?}"))),
            },
            RootDatumSpec::Cartan { cartan, adjoint: false } => RootDatum::from_cartan(cartan).map_err(schema),
            RootDatumSpec::Cartan { cartan, adjoint: true } => RootDatum::adjoint_from_cartan(cartan).map_err(schema),
            RootDatumSpec::Product { product } => {
                let mut parts = product.iter().map(RootDatumSpec::build);
                let first = parts.next().ok_or_else(|| CliError::Schema("empty product".into()))??;
                parts.try_fold(first, |acc, p| Ok(acc.product(&p?)))
            }
            RootDatumSpec::Explicit(r) => Ok(r.clone()),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EmbeddingInput {
    ambient: RootDatumSpec,
    subgroup: RootDatumSpec,
    restriction: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
enum ProblemSpec {
    BoxsplineEval {
        phi: Vec<Vec<i64>>,
        x: Vec<Num>,
    },
    LocalPiece {
        phi: Vec<Vec<i64>>,
        base: Vec<Num>,
        #[serde(alias = "ε")]
        epsilon: Option<Vec<Num>>,
        seed: Option<u64>,
    },
    Vertices {
        phi: Vec<Vec<i64>>,
    },
    Forward {
        phi: Vec<Vec<i64>>,
        m: Vec<MEntry>,
        #[serde(default)]
        shift: Option<Vec<Num>>,
        base: Vec<Num>,
        #[serde(alias = "ε")]
        epsilon: Option<Vec<Num>>,
        seed: Option<u64>,
    },
    Deconvolve {
        phi: Vec<Vec<i64>>,
        m: Vec<MEntry>,
        #[serde(default)]
        shift: Option<Vec<Num>>,
        queries: Option<Vec<Vec<Num>>>,
        #[serde(alias = "ε")]
        epsilon: Option<Vec<Num>>,
        seed: Option<u64>,
        window: Option<i64>,
    },
    VerifyBranching {
        embedding: EmbeddingInput,
        highest: Vec<i64>,
        #[serde(alias = "ε")]
        epsilon: Option<Vec<Num>>,
        seed: Option<u64>,
        window: Option<i64>,
        #[serde(default)]
        selection: Selection,
    },
}

/// Command-line overrides applied on top of the document.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub window: Option<i64>,
}

fn q(x: &BigRational) -> String {
    x.to_string()
}

fn qs(v: &[BigRational]) -> Vec<String> {
    v.iter().map(q).collect()
}

fn weight_list(phi: Vec<Vec<i64>>) -> std::result::Result<WeightList, CliError> {
    let dim = phi.first().map(Vec::len).ok_or_else(|| CliError::Schema("phi must be nonempty".into()))?;
    WeightList::new(dim, phi).map_err(|e| CliError::Schema(e.to_string()))
}

fn require_seed(seed: Option<u64>, over: &Overrides) -> std::result::Result<u64, CliError> {
    over.seed.or(seed).ok_or_else(|| CliError::Schema("seed is required for this mode".into()))
}

fn dimension(v: &[BigRational], dim: usize, what: &str) -> std::result::Result<(), CliError> {
    if v.len() == dim {
        Ok(())
    } else {
        Err(CliError::Schema(format!("{what} has length {}, expected {dim}", v.len())))
    }
}

fn epsilon_for(
    phi: &WeightList,
    given: Option<Vec<Num>>,
    seed: u64,
    op: &'static str,
) -> std::result::Result<Vec<BigRational>, CliError> {
    match given {
        Some(e) => {
            let e = nums(&e);
            dimension(&e, phi.dim(), "epsilon")?;
            Ok(e)
        }
        None => default_epsilon(phi, seed).map_err(engine(op)),
    }
}

fn multiplicity(
    dim: usize,
    m: Vec<MEntry>,
    shift: Option<Vec<Num>>,
) -> std::result::Result<MultiplicityFunction, CliError> {
    let shift = shift.map(|s| nums(&s)).unwrap_or_else(|| vec![BigRational::from_integer(0.into()); dim]);
    dimension(&shift, dim, "shift")?;
    let mut out = MultiplicityFunction::with_shift(shift);
    for entry in m {
        let point = nums(&entry.point);
        dimension(&point, dim, "m point")?;
        let kappa = out
            .lattice_part(&point)
            .ok_or_else(|| CliError::Schema("m point is not on the shifted lattice".into()))?;
        out.add_lattice(kappa, entry.value.0);
    }
    Ok(out)
}

fn poly_json(p: &MultiPoly<BigRational>) -> Value {
    Value::Array(p.terms().iter().map(|(e, c)| json!({"exponent": e, "coeff": q(c)})).collect())
}

fn cyclotomic_json(c: &Cyclotomic) -> Value {
    json!({"order": c.order(), "coeffs": qs(c.coeffs())})
}

fn cyclotomic_poly_json(p: &MultiPoly<Cyclotomic>) -> Value {
    Value::Array(p.terms().iter().map(|(e, c)| json!({"exponent": e, "coeff": cyclotomic_json(c)})).collect())
}

fn vertex_json(s: &TorusPoint) -> Value {
    json!({"coords": qs(s.coords()), "order": s.order()})
}

fn contribution_json(c: &VertexContribution) -> Value {
    let value = match c.value.as_rational() {
        Some(r) => Value::String(q(&r)),
        None => cyclotomic_json(&c.value),
    };
    json!({"vertex": qs(c.vertex.coords()), "value": value})
}

fn deconvolution_json(lambda: &[BigRational], d: &Deconvolution) -> Value {
    json!({
        "point": qs(lambda),
        "value": q(&d.value),
        "contributions": d.contributions.iter().map(contribution_json).collect::<Vec<_>>(),
    })
}

/// Runs one problem document. Returns the report and whether every
/// verification in it passed.
pub fn run_document(doc: &str, over: &Overrides) -> std::result::Result<(Value, bool), CliError> {
    let input: Value = serde_json::from_str(doc).map_err(|e| CliError::Schema(e.to_string()))?;
    let spec: ProblemSpec = serde_json::from_value(input.clone()).map_err(|e| CliError::Schema(e.to_string()))?;
    let (mut report, passed) = match spec {
        ProblemSpec::BoxsplineEval { phi, x } => {
            let phi = weight_list(phi)?;
            let x = nums(&x);
            dimension(&x, phi.dim(), "x")?;
            let value = eval_box(&phi, &x).map_err(engine("eval_box"))?;
            (json!({"value": q(&value)}), true)
        }
        ProblemSpec::LocalPiece { phi, base, epsilon, seed } => {
            let seed = require_seed(seed, over)?;
            let phi = weight_list(phi)?;
            let base = nums(&base);
            dimension(&base, phi.dim(), "base")?;
            let eps = epsilon_for(&phi, epsilon, seed, "local_piece")?;
            let germ = alcove_of(&base, &eps, &phi).map_err(engine("local_piece"))?;
            let piece = local_piece(&phi, &germ, seed).map_err(engine("local_piece"))?;
            let report = json!({
                "epsilon": qs(&eps),
                "signature": germ.signature(),
                "degree_bound": piece.degree_bound,
                "poly": poly_json(&piece.poly),
            });
            (report, true)
        }
        ProblemSpec::Vertices { phi } => {
            let phi = weight_list(phi)?;
            let v = vertex_set(&phi).map_err(engine("vertex_set"))?;
            let coords: Vec<Vec<String>> = v.iter().map(|s| qs(s.coords())).collect();
            let orders: Vec<u64> = v.iter().map(TorusPoint::order).collect();
            (json!({"vertices": coords, "orders": orders}), true)
        }
        ProblemSpec::Forward { phi, m, shift, base, epsilon, seed } => {
            let seed = require_seed(seed, over)?;
            let phi = weight_list(phi)?;
            let m = multiplicity(phi.dim(), m, shift)?;
            let base = nums(&base);
            dimension(&base, phi.dim(), "base")?;
            let eps = epsilon_for(&phi, epsilon, seed, "forward_piece")?;
            alcove_of(&base, &eps, &phi).map_err(engine("forward_piece"))?;
            let model = ForwardModel::new(m, phi, seed).map_err(engine("forward_piece"))?;
            let pieces = (0..model.vertices().len())
                .map(|i| {
                    let p = model.piece(i, &base, &eps).map_err(engine("forward_piece"))?;
                    Ok(json!({"vertex": vertex_json(&model.vertices()[i]), "poly": cyclotomic_poly_json(&p)}))
                })
                .collect::<std::result::Result<Vec<_>, CliError>>()?;
            (json!({"epsilon": qs(&eps), "pieces": pieces}), true)
        }
        ProblemSpec::Deconvolve { phi, m, shift, queries, epsilon, seed, window } => {
            let seed = require_seed(seed, over)?;
            let phi = weight_list(phi)?;
            let m = multiplicity(phi.dim(), m, shift)?;
            let eps = epsilon_for(&phi, epsilon, seed, "deconvolve_at")?;
            let points: Vec<Vec<BigRational>> = match queries {
                Some(qv) => qv.iter().map(|p| nums(p)).collect(),
                None => {
                    let extra = over.window.or(window).unwrap_or(1);
                    probe_window(&m, &phi, extra).iter().map(|k| m.point(k)).collect()
                }
            };
            for p in &points {
                dimension(p, phi.dim(), "query")?;
                if m.lattice_part(p).is_none() {
                    return Err(CliError::Schema("query is not on the lattice of m".into()));
                }
            }
            let model = ForwardModel::new(m, phi.clone(), seed).map_err(engine("deconvolve_at"))?;
            let vertices = model.vertices();
            let d = Deconvolver::new(&phi, &vertices, &eps).map_err(engine("deconvolve_at"))?;
            let results = points
                .iter()
                .map(|p| d.deconvolve(&model, p).map_err(engine("deconvolve_at")))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let report = json!({
                "epsilon": qs(&eps),
                "vertices": vertices.iter().map(|s| qs(s.coords())).collect::<Vec<_>>(),
                "values": results.iter().map(|r| q(&r.value)).collect::<Vec<_>>(),
                "points": points.iter().zip(&results).map(|(p, r)| deconvolution_json(p, r)).collect::<Vec<_>>(),
            });
            (report, true)
        }
        ProblemSpec::VerifyBranching { embedding, highest, epsilon, seed, window, selection } => {
            let seed = require_seed(seed, over)?;
            let spec = EmbeddingSpec::new(embedding.ambient.build()?, embedding.subgroup.build()?, embedding.restriction)
                .map_err(|e| CliError::Schema(e.to_string()))?;
            if highest.len() != spec.ambient.rank() {
                return Err(CliError::Schema("highest weight has the wrong rank".into()));
            }
            let options = BranchingOptions {
                epsilon: epsilon.map(|e| nums(&e)),
                seed,
                window: over.window.or(window).unwrap_or(1),
                selection,
            };
            let r = verify_branching(&spec, &highest, &options).map_err(engine("verify_branching"))?;
            let records: Vec<Value> = r
                .records
                .iter()
                .map(|rec| {
                    json!({
                        "nu": qs(&rec.nu),
                        "expected": q(&rec.expected),
                        "recovered": q(&rec.recovered),
                        "reduced": q(&rec.reduced),
                        "contributions": rec.contributions.iter().map(contribution_json).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let multiplicities: Vec<Value> = r
                .multiplicities
                .lattice_values()
                .iter()
                .map(|(k, v)| json!({"point": qs(&r.multiplicities.point(k)), "value": q(v)}))
                .collect();
            let report = json!({
                "phi": r.phi.vectors(),
                "epsilon": qs(&r.epsilon),
                "vertices": r.vertices.iter().map(|s| qs(s.coords())).collect::<Vec<_>>(),
                "multiplicities": multiplicities,
                "records": records,
                "mismatches": r.mismatches.iter().map(|v| qs(v)).collect::<Vec<_>>(),
                "passed": r.passed(),
            });
            let passed = r.passed();
            (report, passed)
        }
    };
    report["input"] = input;
    Ok((report, passed))
}

/// Entry point of the binary.
pub fn main_with(args: Args) -> ExitCode {
    if let Some(jobs) = args.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            log::warn!("could not configure {jobs} worker threads: {e}");
        }
    }
    let doc = match &args.input {
        Some(path) => std::fs::read_to_string(path),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map(|_| s)
        }
    };
    let doc = match doc {
        Ok(d) => d,
        Err(e) => {
            eprintln!("schema error: cannot read input: {e}");
            return ExitCode::from(EXIT_SCHEMA);
        }
    };
    let over = Overrides { seed: args.seed, window: args.window };
    match run_document(&doc, &over) {
        Ok((report, passed)) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            if passed {
                ExitCode::from(EXIT_OK)
            } else {
                log::error!("verification failed");
                ExitCode::from(EXIT_VERIFICATION_FAILED)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                CliError::Schema(_) => EXIT_SCHEMA,
                CliError::Engine { .. } => EXIT_ENGINE,
            })
        }
    }
}
