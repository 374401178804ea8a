//! `metahecke`: JSON-in, JSON-out verification sweeps.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails (the
//! report still names the failing cases), 2 on malformed input.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use num::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use metahecke::blocks::{classify, r_group, semidirect_orders, BlockDescriptor};
use metahecke::exact::{format_rational, parse_grid};
use metahecke::hecke::{
    braid_residue, he_mul, quadratic_residue, ExtendedHeckeAlgebra, HeckeAlgebra, HeckeElement,
    PresentationSpec,
};
use metahecke::laurent::{GroupAlgebraElement, QLaurent};
use metahecke::mpparams::{
    archetype_pool, classical_match, enumerate_alt_chars, enumerate_s, epsilon_z, hecke_for_block,
    jord_from_s, normed_parameters, verify_match, weil_example, NormedParameter,
};
use metahecke::rankone::{j_square_check, verify_quadratic_report};
use metahecke::rootdata::{braid_order, word_to_element};

const SCHEMA: &str = "v1";

#[derive(Parser)]
#[command(
    name = "metahecke",
    version,
    about = "Exact checks for affine Hecke algebras and metaplectic parameters"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Verb {
    /// Quadratic, braid and associativity checks for a Hecke presentation.
    HeckeCheck {
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        triples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rank-one quadratic relation over a grid of (a, b).
    RankoneVerify {
        /// "lo..hi" in steps of 1/2, or a comma-separated list.
        #[arg(long, default_value = "1/2..3")]
        grid: String,
    },
    /// Classify a block descriptor and report its R-group.
    BlocksClassify { input: PathBuf },
    /// S-choices, alternating characters and Hecke presentations of φ₀.
    MpEnumerate { input: PathBuf },
    /// Compare metaplectic and classical presentations, for one φ₀ or a sweep.
    MpMatch {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        max_rank: u32,
    },
    /// The blocks of the even and odd Weil representations.
    WeilExample {
        #[arg(long, default_value_t = 2)]
        n: u32,
    },
}

/// Malformed input, reported with exit code 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.into())
    }
}

struct Report {
    body: Value,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.verb);
    let (value, code) = match result {
        Ok(r) => {
            let code = if r.ok { 0 } else { 1 };
            (r.body, code)
        }
        Err(InputError(e)) => {
            eprintln!("error: {e:#}");
            (json!({ "schema": SCHEMA, "error": format!("{e:#}") }), 2)
        }
    };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&value)
    } else {
        serde_json::to_string(&value)
    }
    .expect("reports serialize");
    match &cli.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text + "\n") {
                eprintln!("error: writing {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: writing output: {e}");
                    return ExitCode::from(2);
                }
            }
        }
    }
    ExitCode::from(code)
}

fn run(verb: &Verb) -> Result<Report, InputError> {
    match verb {
        Verb::HeckeCheck {
            input,
            triples,
            seed,
        } => hecke_check(&read_spec(input)?, *triples, *seed),
        Verb::RankoneVerify { grid } => rankone_verify(grid),
        Verb::BlocksClassify { input } => blocks_classify(&read_spec(input)?),
        Verb::MpEnumerate { input } => mp_enumerate(&read_spec(input)?),
        Verb::MpMatch { input, max_rank } => match input {
            Some(path) => mp_match(vec![read_spec(path)?]),
            None => mp_match(
                (1..=*max_rank)
                    .flat_map(|n| normed_parameters(&archetype_pool(), n))
                    .collect(),
            ),
        },
        Verb::WeilExample { n } => {
            let w = weil_example(*n)?;
            let ok = w.plus.matches_reference;
            Ok(Report {
                body: envelope(
                    "weil-example",
                    json!({ "n": n, "blocks": [w.plus, w.minus] }),
                    ok,
                ),
                ok,
            })
        }
    }
}

/// Reads a JSON input file, checks the optional `schema` tag and deserializes the
/// rest, naming the offending path on failure.
fn read_spec<T: DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut value: Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(obj) = value.as_object_mut() {
        match obj.remove("schema") {
            None => {}
            Some(Value::String(s)) if s == SCHEMA => {}
            Some(other) => bail!("unsupported schema {other}; expected \"{SCHEMA}\""),
        }
    }
    serde_path_to_error::deserialize(value).map_err(|e| {
        let at = e.path().to_string();
        anyhow::anyhow!("{}: at `{at}`: {}", path.display(), e.into_inner())
    })
}

fn envelope(verb: &str, body: Value, ok: bool) -> Value {
    let mut v = json!({ "schema": SCHEMA, "verb": verb, "ok": ok });
    if let (Some(dst), Value::Object(src)) = (v.as_object_mut(), body) {
        dst.extend(src);
    }
    v
}

fn random_element(alg: &Arc<HeckeAlgebra>, rng: &mut ChaCha8Rng) -> HeckeElement {
    let d = alg.datum();
    let mut x = HeckeElement::zero(alg);
    for _ in 0..rng.gen_range(1..=3) {
        let word: Vec<usize> = if d.num_simple() == 0 {
            Vec::new()
        } else {
            (0..rng.gen_range(0..=3))
                .map(|_| rng.gen_range(0..d.num_simple()))
                .collect()
        };
        let lambda: Vec<i64> = (0..alg.rank()).map(|_| rng.gen_range(-1..=1)).collect();
        let c = QLaurent::monomial(
            rng.gen_range(-2..=2),
            BigRational::from_integer(rng.gen_range(-2i64..=2).into()),
        );
        x.add_term(
            word_to_element(&word, d),
            GroupAlgebraElement::monomial(lambda, c),
        );
    }
    x
}

fn hecke_check(spec: &PresentationSpec, triples: usize, seed: u64) -> Result<Report, InputError> {
    let alg = HeckeAlgebra::from_spec(spec)?;
    let r_order = match &spec.extended {
        Some(r) => ExtendedHeckeAlgebra::new(alg.clone(), r.clone())?
            .r_group()
            .len(),
        None => 1,
    };
    let n = alg.datum().num_simple();
    let quadratic: Vec<Value> = (0..n)
        .map(|i| json!({ "i": i, "ok": quadratic_residue(&alg, i).is_zero() }))
        .collect();
    let mut braid = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let m = braid_order(i, j, alg.datum());
            braid
                .push(json!({ "i": i, "j": j, "m": m, "ok": braid_residue(&alg, i, j).is_zero() }));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for k in 0..triples {
        let (x, y, z) = (
            random_element(&alg, &mut rng),
            random_element(&alg, &mut rng),
            random_element(&alg, &mut rng),
        );
        let left = he_mul(&he_mul(&x, &y)?, &z)?;
        let right = he_mul(&x, &he_mul(&y, &z)?)?;
        if left != right {
            failures.push(
                json!({ "triple": k, "x": x.to_string(), "y": y.to_string(), "z": z.to_string() }),
            );
        }
    }
    let all = |v: &[Value]| v.iter().all(|c| c["ok"] == json!(true));
    let ok = all(&quadratic) && all(&braid) && failures.is_empty();
    let body = json!({
        "rank": alg.rank(),
        "simple_roots": n,
        "r_group_order": r_order,
        "flags": alg.flags(),
        "quadratic": quadratic,
        "braid": braid,
        "associativity": { "triples": triples, "seed": seed, "failures": failures },
    });
    Ok(Report {
        body: envelope("hecke-check", body, ok),
        ok,
    })
}

fn rankone_verify(grid: &str) -> Result<Report, InputError> {
    let points = parse_grid(grid).context("--grid")?;
    if points.is_empty() {
        return Err(anyhow::anyhow!("--grid {grid:?} is empty").into());
    }
    let mut results = Vec::new();
    let mut ok = true;
    for a in &points {
        for b in points.iter().filter(|b| *b <= a) {
            let j_ok = j_square_check(a, b)?;
            ok &= j_ok;
            for (e1, em1) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let r = verify_quadratic_report(a, b, e1, em1)?;
                ok &= r.ok();
                let mut v = serde_json::to_value(&r)?;
                v["eps"] = json!([e1, em1]);
                v["j_square_ok"] = json!(j_ok);
                results.push(v);
            }
        }
    }
    let grid_str: Vec<String> = points.iter().map(format_rational).collect();
    Ok(Report {
        body: envelope(
            "rankone-verify",
            json!({ "grid": grid_str, "results": results }),
            ok,
        ),
        ok,
    })
}

fn blocks_classify(bd: &BlockDescriptor) -> Result<Report, InputError> {
    let cb = classify(bd)?;
    let r = r_group(bd, &cb)?;
    let (w, r_ord, wmo) = semidirect_orders(&cb)?;
    let ok = w * r_ord == wmo && cb.semidirect_verified != Some(false);
    let body = json!({
        "block": cb,
        "r_group": r,
        "orders": { "w_o": w, "r": r_ord, "w_m_o": wmo },
    });
    Ok(Report {
        body: envelope("blocks-classify", body, ok),
        ok,
    })
}

fn mp_enumerate(p0: &NormedParameter) -> Result<Report, InputError> {
    p0.validate()?;
    let mut blocks = Vec::new();
    for s in enumerate_s(p0) {
        let jord = jord_from_s(p0, &s)?;
        let hecke = p0
            .classes
            .iter()
            .map(|c| {
                let h = hecke_for_block(p0, &s, &c.class.label)?;
                Ok(json!({
                    "rho": c.class.label,
                    "presentation": h,
                    "display": h.to_string(),
                    "classical_match": classical_match(&c.class, c.multiplicity).to_string(),
                }))
            })
            .collect::<Result<Vec<_>, metahecke::mpparams::MpError>>()?;
        for e in enumerate_alt_chars(&jord)? {
            blocks.push(json!({
                "S": s,
                "jord": jord,
                "epsilon": e,
                "epsilon_Z": epsilon_z(&e),
                "hecke": hecke,
            }));
        }
    }
    Ok(Report {
        body: envelope("mp-enumerate", json!({ "n": p0.n, "blocks": blocks }), true),
        ok: true,
    })
}

fn mp_match(params: Vec<NormedParameter>) -> Result<Report, InputError> {
    let mut reports = Vec::new();
    let mut mismatches = 0;
    for p0 in &params {
        let r = verify_match(p0)?;
        mismatches += r.mismatches;
        reports.push(
            json!({ "phi0": p0, "checks": r.checks.len(), "mismatches": r.mismatches,
            "failing": r.checks.iter().filter(|c| !c.matches).collect::<Vec<_>>() }),
        );
    }
    let ok = mismatches == 0;
    let body = json!({ "parameters": params.len(), "mismatches": mismatches, "reports": reports });
    Ok(Report {
        body: envelope("mp-match", body, ok),
        ok,
    })
}
