//! Instance files, reports and command implementations behind the `ringload`
//! binary.
//!
//! Instance files are LF-separated ASCII text. `#` starts a comment. The
//! first line is either `split <m>`, followed by `m` lines `pair <u> <v>`,
//! or `ring <n>`, followed by lines `demand <i> <j> <value> [<clockwise>]`.
//! The optional last field is the part routed clockwise and defaults to the
//! whole value. All numbers are exact integers or fractions `p/q`.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use ringload_core::adversary::catalog;
use ringload_core::adversary::{build_milp, export_lp, heuristic_search, SearchConfig};
use ringload_core::boost::{boost, BoostedInstance, Role};
use ringload_core::exact::{
    min_additive_performance_capped, optimal_unsplittable_boosted, split_optimum_boosted, split_optimum_crossing,
};
use ringload_core::pattern::Pattern;
use ringload_core::rational::{describe, format_rational, int, parse_rational, to_f64, Rational};
use ringload_core::reduce::{to_crossing_form, GeneralSplitRouting, Reduced};
use ringload_core::rounding::{round_main, round_medium, round_upper, ssw_round, BoundedRounding};
use ringload_core::routing::{CrossingRouting, Demand, LoadProfile, RingInstance};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] ringload_core::Error),
}

impl CliError {
    /// 3 for a failed guarantee, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(ringload_core::Error::GuaranteeViolated(_))
            | CliError::Core(ringload_core::Error::BoundViolated { .. }) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Input {
    Split(CrossingRouting),
    Ring(GeneralSplitRouting),
}

fn parse_err(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Parse { line, msg: msg.into() }
}

fn number(line: usize, tok: &str) -> Result<Rational> {
    parse_rational(tok).ok_or_else(|| parse_err(line, format!("not an exact rational: {tok:?}")))
}

fn count(line: usize, tok: &str) -> Result<usize> {
    tok.parse().map_err(|_| parse_err(line, format!("not a count: {tok:?}")))
}

pub fn parse_input(text: &str) -> Result<Input> {
    let mut lines = text.lines().enumerate().filter_map(|(k, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then(|| (k + 1, body.split_whitespace().collect::<Vec<_>>()))
    });
    let (line, header) = lines.next().ok_or_else(|| parse_err(1, "empty instance"))?;
    match header.as_slice() {
        ["split", m] => {
            let m = count(line, m)?;
            let (mut u, mut v) = (Vec::new(), Vec::new());
            for (line, toks) in lines {
                match toks.as_slice() {
                    ["pair", a, b] => {
                        u.push(number(line, a)?);
                        v.push(number(line, b)?);
                    }
                    _ => return Err(parse_err(line, "expected `pair <u> <v>`")),
                }
            }
            if u.len() != m {
                return Err(parse_err(line, format!("header announces {m} pairs, found {}", u.len())));
            }
            Ok(Input::Split(CrossingRouting::new(u, v)?))
        }
        ["ring", n] => {
            let n = count(line, n)?;
            let (mut demands, mut parts) = (Vec::new(), Vec::new());
            for (line, toks) in lines {
                let (i, j, value, cw) = match toks.as_slice() {
                    ["demand", i, j, value] => (i, j, value, None),
                    ["demand", i, j, value, cw] => (i, j, value, Some(cw)),
                    _ => return Err(parse_err(line, "expected `demand <i> <j> <value> [<clockwise>]`")),
                };
                let value = number(line, value)?;
                parts.push(match cw {
                    Some(cw) => number(line, cw)?,
                    None => value.clone(),
                });
                demands.push(Demand {
                    i: count(line, i)?,
                    j: count(line, j)?,
                    value,
                });
            }
            let instance = RingInstance::new(n, demands)?;
            Ok(Input::Ring(GeneralSplitRouting::new(instance, parts)?))
        }
        _ => Err(parse_err(line, "expected `split <m>` or `ring <n>`")),
    }
}

pub fn read_input(path: &Path) -> Result<Input> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_input(&text)
}

pub fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn format_split(r: &CrossingRouting) -> String {
    let mut out = format!("split {}\n", r.m());
    for (u, v) in r.u().iter().zip(r.v()) {
        writeln!(out, "pair {} {}", format_rational(u), format_rational(v)).unwrap();
    }
    out
}

pub fn format_ring(inst: &RingInstance, clockwise_part: &[Rational]) -> String {
    let mut out = format!("ring {}\n", inst.n());
    for (d, cw) in inst.demands().iter().zip(clockwise_part) {
        write!(out, "demand {} {} {}", d.i, d.j, format_rational(&d.value)).unwrap();
        if cw != &d.value {
            write!(out, " {}", format_rational(cw)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// `x` together with its multiple of `D`, e.g. `11 = 11/10 D ≈ 1.100000 D`.
fn times_d(x: &Rational, big_d: &Rational) -> String {
    let f = x / big_d;
    format!("{} = {} D ≈ {:.6} D", describe(x), format_rational(&f), to_f64(&f))
}

fn loads_line(loads: &LoadProfile) -> String {
    loads.0.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

fn directions(clockwise: &[bool]) -> String {
    clockwise.iter().map(|&c| if c { "cw" } else { "ccw" }).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RoundMethod {
    Main,
    Ssw,
    Medium,
    Upper,
    Brute,
}

fn round_report(r: &CrossingRouting, method: RoundMethod, cap: usize, out: &mut String) -> Result<Vec<bool>> {
    let big_d = r.max_demand();
    let (delta, _) = r.delta();
    writeln!(out, "m: {}", r.m()).unwrap();
    writeln!(out, "D: {}", describe(&big_d)).unwrap();
    writeln!(out, "delta: {}", describe(&delta)).unwrap();
    let bounded: BoundedRounding<'_> = match method {
        RoundMethod::Brute => {
            let (perf, p) = min_additive_performance_capped(r, cap)?;
            writeln!(out, "method: brute").unwrap();
            writeln!(out, "directions: {}", directions(p.clockwise())).unwrap();
            writeln!(out, "optimum: {}", times_d(&perf, &big_d)).unwrap();
            return Ok(p.clockwise().to_vec());
        }
        RoundMethod::Main => round_main(r)?,
        RoundMethod::Ssw => ssw_round(r)?,
        RoundMethod::Medium => round_medium(r)?,
        RoundMethod::Upper => round_upper(r)?,
    };
    writeln!(out, "method: {}", bounded.method).unwrap();
    writeln!(out, "source: {}", bounded.source).unwrap();
    writeln!(out, "directions: {}", directions(bounded.pattern.clockwise())).unwrap();
    writeln!(out, "realized: {}", times_d(&bounded.realized, &big_d)).unwrap();
    writeln!(out, "certified: {}", times_d(&bounded.certified_bound, &big_d)).unwrap();
    Ok(bounded.pattern.clockwise().to_vec())
}

/// Rounds a split routing; ring inputs are first brought to crossing form
/// and the chosen pattern is lifted back.
pub fn cmd_round(input: &Input, method: RoundMethod, cap: usize) -> Result<String> {
    let mut out = String::new();
    match input {
        Input::Split(r) => {
            round_report(r, method, cap, &mut out)?;
        }
        Input::Ring(s) => match to_crossing_form(s)? {
            Reduced::Trivial { trace } => {
                writeln!(out, "reduced: no split demand left after uncrossing").unwrap();
                writeln!(out, "max load: {}", describe(&trace.uncrossed.loads().max())).unwrap();
            }
            Reduced::Crossing { routing, trace } => {
                writeln!(out, "reduced: {} crossing demands", routing.m()).unwrap();
                let before = trace.uncrossed.loads();
                let choice = round_report(&routing, method, cap, &mut out)?;
                let p = Pattern::new(&routing, choice, int(0));
                let lifted = trace.lift(&p);
                let after = trace.uncrossed.instance().unsplittable_loads(&lifted);
                writeln!(out, "lifted directions: {}", directions(&lifted)).unwrap();
                writeln!(out, "split max load: {}", describe(&before.max())).unwrap();
                writeln!(out, "unsplittable max load: {}", describe(&after.max())).unwrap();
            }
        },
    }
    Ok(out)
}

pub fn cmd_verify(input: &Input) -> Result<String> {
    let mut out = String::new();
    match input {
        Input::Split(r) => {
            let (delta, i_star) = r.delta();
            writeln!(out, "kind: split").unwrap();
            writeln!(out, "m: {}", r.m()).unwrap();
            writeln!(out, "D: {}", describe(&r.max_demand())).unwrap();
            writeln!(out, "delta: {} (demand {})", describe(&delta), i_star + 1).unwrap();
            let loads = r.split_loads();
            writeln!(out, "loads: {}", loads_line(&loads)).unwrap();
            writeln!(out, "max load: {}", describe(&loads.max())).unwrap();
            writeln!(out, "split optimum: {}", describe(&split_optimum_crossing(r))).unwrap();
        }
        Input::Ring(s) => {
            writeln!(out, "kind: ring").unwrap();
            writeln!(out, "n: {}", s.instance().n()).unwrap();
            writeln!(out, "demands: {}", s.instance().demands().len()).unwrap();
            writeln!(out, "split demands: {}", s.split_indices().len()).unwrap();
            writeln!(out, "D: {}", describe(&s.instance().max_demand())).unwrap();
            let loads = s.loads();
            writeln!(out, "loads: {}", loads_line(&loads)).unwrap();
            writeln!(out, "max load: {}", describe(&loads.max())).unwrap();
            match to_crossing_form(s)? {
                Reduced::Trivial { .. } => writeln!(out, "reduced: trivial").unwrap(),
                Reduced::Crossing { routing, .. } => {
                    writeln!(out, "reduced: m = {}, delta = {}", routing.m(), describe(&routing.delta().0)).unwrap()
                }
            }
        }
    }
    Ok(out)
}

fn boosted_parts(b: &BoostedInstance) -> Vec<Rational> {
    b.instance
        .demands()
        .iter()
        .zip(&b.roles)
        .map(|(d, role)| match role {
            Role::Crossing { clockwise_part, .. } => clockwise_part.clone(),
            Role::Short { home_clockwise: true, .. } => d.value.clone(),
            Role::Short { home_clockwise: false, .. } => int(0),
        })
        .collect()
}

/// The boosted instance as a ring file at its equalized routing. With
/// `check`, the lower-bound verification is appended as comments.
pub fn cmd_boost(input: &Input, check: bool, cap: usize) -> Result<String> {
    let Input::Split(r) = input else {
        return Err(ringload_core::Error::InvalidRouting("boost needs a split instance".into()).into());
    };
    let b = boost(r);
    let mut out = format!(
        "# boosted from m = {}, D = {}, equalized load {}\n",
        r.m(),
        format_rational(&r.max_demand()),
        format_rational(&b.equalized_load)
    );
    out.push_str(&format_ring(&b.instance, &boosted_parts(&b)));
    if check {
        let (alpha_d, _) = min_additive_performance_capped(r, cap)?;
        let l_star = split_optimum_boosted(&b)?;
        let (l, _) = optimal_unsplittable_boosted(&b, cap)?;
        let gap = &l - &l_star;
        writeln!(out, "# L* = {}", describe(&l_star)).unwrap();
        writeln!(out, "# L = {}", describe(&l)).unwrap();
        writeln!(out, "# L - L* = {}", describe(&gap)).unwrap();
        writeln!(out, "# alpha D = {}", describe(&alpha_d)).unwrap();
        if gap < alpha_d {
            return Err(ringload_core::Error::BoundViolated {
                gap: format_rational(&gap),
                alpha_d: format_rational(&alpha_d),
            }
            .into());
        }
    }
    Ok(out)
}

/// LP text plus a one-line summary for stderr.
pub fn cmd_export_milp(m: usize, reduce: bool, symmetry: bool) -> Result<(String, String)> {
    let model = build_milp(m, reduce, symmetry)?;
    let summary = format!(
        "m = {m}: {} binaries, {} continuous, {} constraints",
        model.binary_count(),
        model.continuous_count(),
        model.constraints.len()
    );
    Ok((export_lp(&model), summary))
}

pub fn cmd_search(cfg: &SearchConfig) -> Result<String> {
    let res = heuristic_search(cfg)?;
    let mut out = format!(
        "# search m = {} seed = {} budget = {}: value {} after {} evaluations (restart {})\n",
        cfg.m,
        cfg.seed,
        cfg.budget,
        describe(&res.value),
        res.evaluations,
        res.restart
    );
    out.push_str(&format_split(&res.routing));
    Ok(out)
}

pub fn cmd_gen(name: &str, eps: Option<&Rational>, m: Option<usize>) -> Result<String> {
    let r = catalog::lookup(name, eps, m)?;
    let mut header = format!("# {name}");
    if let Some(e) = eps {
        write!(header, " eps={}", format_rational(e)).unwrap();
    }
    if let Some(m) = m {
        write!(header, " m={m}").unwrap();
    }
    header.push('\n');
    Ok(header + &format_split(&r))
}

pub fn parse_eps(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not an exact rational: {s:?}"))
}
