use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fsgc::error::{Error, Result};
use fsgc::extract::{closed_form, coefficients, derive_recurrence, recurrence_coefficients};
use fsgc::group::{check_mup_zero_structure, compute_type, generate_order_tree, normalise, CheckOutcome, GroupType};
use fsgc::io::{parse_divisor_tree, parse_order_graph, parse_rep, serialize_divisor_tree, serialize_order_graph, serialize_rep};
use fsgc::lift::{lift_group, truncation_from_env, verify_lift_with, ORACLE_CHECK_BOUND};
use fsgc::ode::{derive_f_equation, reduce_equation};
use fsgc::oracle::{f_direct, theta_coeffs};
use fsgc::reference::Example;
use fsgc::ring::PrimePower;

#[derive(Parser)]
#[command(name = "fsgc", version, about = "Free subgroup numbers of virtually free groups modulo prime powers")]
struct Cli {
    /// Print a JSON envelope {"ok", "data", "error"} instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// m, the zeta table, mu, and mu_p if a prime is given.
    Invariants {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Removes trivial amalgamations.
    Normalise {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Recovers the divisor tree of a tree with mu_p = 0, or reports why there is none.
    #[command(name = "check-mup0")]
    CheckMup0 {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        prime: u64,
    },
    /// Builds the order tree described by a divisor tree.
    Generate {
        #[arg(long = "divisor-tree")]
        divisor_tree: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// The functional equation for F, optionally reduced mod p^a.
    Ode {
        #[arg(long)]
        graph: PathBuf,
        /// Modulus written as "p^a", e.g. "3^4".
        #[arg(long = "mod")]
        modulus: Option<String>,
    },
    /// Lifts F = Phi (mod p) to a representation mod p^alpha and writes it as JSON.
    Lift {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        alpha: u32,
        #[arg(short = 'o', long)]
        output: PathBuf,
    },
    /// Prints "lambda value" lines for f_lambda mod p^alpha.
    Count {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        prime: u64,
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value_t = Method::Lifted)]
        method: Method,
        /// Cross-checks every applicable method and fails on a mismatch.
        #[arg(long)]
        verify: bool,
    },
    /// Prints the closed form of f_lambda on one residue class mod p-1.
    Congruence {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        residue: u64,
    },
    /// Runs the bundled reference groups end to end.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Lifted,
    Recurrence,
}

struct Output {
    text: String,
    data: Value,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn load_type(path: &Path) -> Result<GroupType> {
    Ok(compute_type(&parse_order_graph(&read(path)?)?))
}

fn parse_modulus(s: &str) -> Result<PrimePower> {
    let bad = || Error::InvalidInput(format!("modulus {s:?} is not of the form p^a"));
    let (p, a) = s.split_once('^').ok_or_else(bad)?;
    PrimePower::new(p.trim().parse().map_err(|_| bad())?, a.trim().parse().map_err(|_| bad())?)
}

fn invariants(graph: &Path, prime: Option<u64>) -> Result<Output> {
    let t = load_type(graph)?;
    let mut text = format!("m = {}\n", t.m());
    for (k, z) in t.zeta() {
        text += &format!("zeta_{k} = {z}\n");
    }
    text += &format!("mu = {}\n", t.free_rank());
    let mut data = json!({
        "m": t.m(),
        "zeta": t.zeta().iter().map(|(k, z)| (k.to_string(), json!(z))).collect::<serde_json::Map<_, _>>(),
        "mu": t.free_rank(),
    });
    if let Some(p) = prime {
        PrimePower::new(p, 1)?;
        text += &format!("mu_{p} = {}\n", t.p_rank(p));
        data["mu_p"] = json!(t.p_rank(p));
    }
    Ok(Output { text, data })
}

fn normalise_cmd(graph: &Path, output: &Path) -> Result<Output> {
    let g = parse_order_graph(&read(graph)?)?;
    let n = normalise(&g);
    write(output, &serialize_order_graph(&n))?;
    let text = format!("{} vertices, {} edges -> {} vertices, {} edges\n", g.vertices().len(), g.edges().len(), n.vertices().len(), n.edges().len());
    Ok(Output { text, data: json!({"vertices": n.vertices().len(), "edges": n.edges().len(), "output": output}) })
}

fn check_mup0(graph: &Path, p: u64) -> Result<Output> {
    PrimePower::new(p, 1)?;
    let g = parse_order_graph(&read(graph)?)?;
    match check_mup_zero_structure(&g, p)? {
        CheckOutcome::Accepted(d) => {
            let s = serialize_divisor_tree(&d);
            Ok(Output { text: s.clone() + "\n", data: serde_json::from_str(&s).expect("valid JSON") })
        }
        CheckOutcome::Rejected(r) => Err(Error::Hypothesis(r.to_string())),
    }
}

fn generate(path: &Path, p: u64, output: &Path) -> Result<Output> {
    let d = parse_divisor_tree(&read(path)?)?;
    let g = generate_order_tree(&d, p)?;
    write(output, &serialize_order_graph(&g))?;
    let t = compute_type(&g);
    let text = format!("{} vertices, m = {}, mu = {}, mu_{p} = {}\n", g.vertices().len(), t.m(), t.free_rank(), t.p_rank(p));
    Ok(Output { text, data: json!({"vertices": g.vertices().len(), "m": t.m(), "mu": t.free_rank(), "mu_p": t.p_rank(p)}) })
}

fn ode(graph: &Path, modulus: Option<&str>) -> Result<Output> {
    let t = load_type(graph)?;
    let mut e = derive_f_equation(&theta_coeffs(&t)?);
    if let Some(m) = modulus {
        e = reduce_equation(&e, &parse_modulus(m)?);
    }
    let s = e.to_string();
    Ok(Output { text: s.clone() + "\n", data: json!({"equation": s, "terms": e.len()}) })
}

fn lift_cmd(graph: &Path, p: u64, alpha: u32, output: &Path) -> Result<Output> {
    let t = load_type(graph)?;
    let mut rep = lift_group(&t, p, alpha)?;
    let order = truncation_from_env(rep.mu(), alpha)?;
    let eq = reduce_equation(&derive_f_equation(&theta_coeffs(&t)?), &rep.ring());
    let report = verify_lift_with(&rep, &t, &eq, order, ORACLE_CHECK_BOUND)?;
    if !report.ok() {
        return Err(Error::Internal(format!("lifted representation fails verification: {report:?}")));
    }
    rep.truncation = Some(order);
    write(output, &serialize_rep(&rep))?;
    let mut text = String::new();
    for (i, c) in rep.coeffs().iter().enumerate() {
        if !c.is_zero() {
            text += &format!("Phi^{i}: ({}) / Y^{}\n", c.numerator(), c.y_exponent());
        }
    }
    text += &format!("verified to order {order}\n");
    Ok(Output { text, data: json!({"output": output, "verified_to": order, "mu": rep.mu(), "N": rep.n()}) })
}

/// `f_from..=f_to` mod p^alpha by one method.
fn count_values(t: &GroupType, ring: PrimePower, from: u64, to: u64, method: Method) -> Result<Vec<u64>> {
    match method {
        Method::Direct => {
            let seq = f_direct(t, to as usize)?;
            Ok((from..=to).map(|l| ring.reduce_big(&seq.f[l as usize])).collect())
        }
        Method::Lifted => coefficients(&lift_group(t, ring.p(), ring.alpha())?, from, to),
        Method::Recurrence => {
            let rep = lift_group(t, ring.p(), ring.alpha())?;
            if rep.algebra.y().is_trivial() {
                return Err(Error::InvalidInput("the recurrence method needs Y != 1 (mu not congruent to 0 or 1 mod p, p odd)".into()));
            }
            let p1 = ring.p() - 1;
            let mut out = vec![0; (to - from + 1) as usize];
            for r in 0..p1 {
                let spec = derive_recurrence(&closed_form(&rep, r)?)?;
                if to < r {
                    continue;
                }
                let l_end = ((to - r) / p1) as i64;
                for (l, v) in recurrence_coefficients(&spec, l_end).into_iter().enumerate() {
                    let lambda = p1 * l as u64 + r;
                    if (from..=to).contains(&lambda) {
                        out[(lambda - from) as usize] = v;
                    }
                }
            }
            Ok(out)
        }
    }
}

fn count(graph: &Path, p: u64, alpha: u32, from: u64, to: u64, method: Method, verify: bool) -> Result<Output> {
    if from == 0 || from > to {
        return Err(Error::InvalidInput(format!("need 1 <= from <= to, got {from}..{to}")));
    }
    let t = load_type(graph)?;
    let ring = PrimePower::new(p, alpha)?;
    let start = Instant::now();
    let values = count_values(&t, ring, from, to, method)?;
    let elapsed = start.elapsed();
    let mut checked = vec![method];
    if verify {
        for other in [Method::Direct, Method::Lifted, Method::Recurrence] {
            if other == method {
                continue;
            }
            match count_values(&t, ring, from, to, other) {
                Ok(v) => {
                    if let Some(i) = (0..v.len()).find(|&i| v[i] != values[i]) {
                        return Err(Error::Internal(format!(
                            "methods disagree at lambda = {}: {method:?} gives {}, {other:?} gives {}",
                            from + i as u64,
                            values[i],
                            v[i]
                        )));
                    }
                    checked.push(other);
                }
                Err(Error::InvalidInput(_)) | Err(Error::Hypothesis(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    let text: String = values.iter().enumerate().map(|(i, v)| format!("{} {v}\n", from + i as u64)).collect();
    let data = json!({
        "modulus": ring.modulus(),
        "from": from,
        "values": values,
        "methods": checked.iter().map(|m| format!("{m:?}").to_lowercase()).collect::<Vec<_>>(),
        "seconds": elapsed.as_secs_f64(),
    });
    Ok(Output { text, data })
}

fn congruence(path: &Path, residue: u64) -> Result<Output> {
    let rep = parse_rep(&read(path)?)?;
    let form = closed_form(&rep, residue)?;
    let mut text = form.to_string();
    let mut data = json!({
        "p": form.p, "alpha": form.alpha, "residue": form.r, "mode": format!("{:?}", form.mode),
        "reference_binomial": format!("C({} L + {}, L)", form.mu, form.n * form.r),
        "regular_from": form.regular_from(),
        "terms": form.terms.len(),
    });
    if let Ok(spec) = derive_recurrence(&form) {
        let w: Vec<String> = spec.weights.iter().map(|w| w.to_string()).collect();
        text += &format!("recurrence: weights ({}) on S(L+{})..S(L), {} boundary parts\n", w.join(", "), spec.order(), spec.inhomogeneity.len());
        data["recurrence_weights"] = json!(w);
    }
    Ok(Output { text, data })
}

fn selftest() -> Result<Output> {
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut failed = Vec::new();
    for ex in Example::ALL {
        let (p, a) = ex.modulus();
        let start = Instant::now();
        let t = ex.group_type();
        let rep = lift_group(&t, p, a)?;
        let rep_ok = ex.representation_matches(&rep)?;
        let eq_ok = ex.equation_matches()?;
        let oracle = f_direct(&t, 60)?;
        let vals = coefficients(&rep, 1, 60)?;
        let ring = rep.ring();
        let count_ok = (1..=60).all(|l| vals[l - 1] == ring.reduce_big(&oracle.f[l]));
        let ok = rep_ok && eq_ok && count_ok;
        if !ok {
            failed.push(ex.number());
        }
        let secs = start.elapsed().as_secs_f64();
        text += &format!(
            "Example {} ({}, mod {}): representation {}, equation {}, counts to 60 {} [{secs:.2}s]\n",
            ex.number(),
            ex.name(),
            ring,
            verdict(rep_ok),
            verdict(eq_ok),
            verdict(count_ok)
        );
        rows.push(json!({"example": ex.number(), "group": ex.name(), "representation": rep_ok, "equation": eq_ok, "counts": count_ok}));
    }
    if !failed.is_empty() {
        return Err(Error::Internal(format!("{text}self-test failed for Examples {failed:?}")));
    }
    Ok(Output { text, data: json!(rows) })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Invariants { graph, prime } => invariants(graph, *prime),
        Command::Normalise { graph, output } => normalise_cmd(graph, output),
        Command::CheckMup0 { graph, prime } => check_mup0(graph, *prime),
        Command::Generate { divisor_tree, prime, output } => generate(divisor_tree, *prime, output),
        Command::Ode { graph, modulus } => ode(graph, modulus.as_deref()),
        Command::Lift { graph, prime, alpha, output } => lift_cmd(graph, *prime, *alpha, output),
        Command::Count { graph, prime, alpha, from, to, method, verify } => count(graph, *prime, *alpha, *from, *to, *method, *verify),
        Command::Congruence { rep, residue } => congruence(rep, *residue),
        Command::Selftest => selftest(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command);
    let code = match &result {
        Ok(_) => 0,
        Err(e) => e.exit_code(),
    };
    if cli.json {
        let env = match &result {
            Ok(o) => json!({"ok": true, "data": o.data, "error": Value::Null}),
            Err(e) => json!({"ok": false, "data": Value::Null, "error": {"code": e.exit_code(), "kind": e.kind(), "message": e.to_string()}}),
        };
        println!("{}", serde_json::to_string_pretty(&env).expect("envelope serializes"));
    } else {
        match &result {
            Ok(o) => print!("{}", o.text),
            Err(e) => eprintln!("error: {e}"),
        }
    }
    ExitCode::from(code as u8)
}
