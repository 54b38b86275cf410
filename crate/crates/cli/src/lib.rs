//! Command-line front end: homology tables for the gauge complexes, the
//! verification suites, and the constant-sheaf cross-check.
//!
//! Every command produces a [`Report`], printed as text or JSON. Output is a
//! pure function of the input file, the flags and the seed.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use homotopy_gauge::abelian::FgAbGroup;
use homotopy_gauge::complexes::{labelled_iso, quasi_iso_check, ChainComplex, ChainMap};
use homotopy_gauge::diagrams::{Diagram, Variance};
use homotopy_gauge::gauge::{
    cech_deligne, deligne_complex, eta_theta, extended_config, extended_config_direct,
    extended_obs, extended_obs_direct, local_config_complex, local_obs_complex, phi_map, psi_map,
    pushpull_functoriality, separation_check, PairingContext, SeparationOutcome,
};
use homotopy_gauge::holimit::holim;
use homotopy_gauge::simplicial::{
    cohomology, star_poset, CoeffGroup, SimplicialComplex, SimplicialIso,
};
use homotopy_gauge::{Error, Result};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "hgauge",
    about = "Homotopy limits, colimits and discrete Abelian gauge theory on simplicial complexes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every command.
#[derive(clap::Args, Debug, Clone)]
pub struct Common {
    /// Complex file: one maximal simplex per line, `#` starts a comment line.
    #[arg(long)]
    pub input: PathBuf,
    /// Coefficients: `Z` or `Z/q` with `q ≥ 2`.
    #[arg(long)]
    pub coeff: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Homology of a gauge complex.
    Homology {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Which::ExtConfig)]
        which: Which,
    },
    /// Run a verification suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random samples per check once exhaustive enumeration exceeds it.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
    },
    /// Holim of the constant diagram `G[n]` over the star poset, next to `H^{n−k}(K; G)`.
    ConstantSheaf {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        degree: i64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    /// Local configuration complex of the whole complex.
    Local,
    /// Local observable complex of the whole complex.
    LocalObs,
    ExtConfig,
    ExtObs,
    Deligne,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    EngineVsHand,
    DeligneCompare,
    Eta,
    Zeta,
    Pairing,
    Separation,
}

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GroupLine {
    pub degree: i64,
    pub group: String,
}

/// `H_k` of the holim against `H^{n−k}` of the complex.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ComparisonLine {
    pub degree: i64,
    pub holim: String,
    pub cohomology_degree: i64,
    pub cohomology: String,
    pub matches: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub coeff: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub homology: Vec<GroupLine>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub comparison: Vec<ComparisonLine>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<String>,
}

impl Report {
    fn new(command: String, coeff: &CoeffGroup) -> Self {
        Report {
            command,
            coeff: coeff_name(coeff),
            status: Status::Pass,
            homology: Vec::new(),
            comparison: Vec::new(),
            checks: Vec::new(),
            witnesses: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, status: Status, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status,
            detail: detail.into(),
        });
    }

    fn pass_if(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.check(name, if ok { Status::Pass } else { Status::Fail }, detail);
    }

    /// Fail beats inconclusive beats pass.
    fn settle(mut self) -> Self {
        let statuses = self
            .checks
            .iter()
            .map(|c| c.status)
            .chain(self.comparison.iter().map(|c| {
                if c.matches {
                    Status::Pass
                } else {
                    Status::Fail
                }
            }));
        self.status = statuses.fold(Status::Pass, |acc, s| match (acc, s) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
            _ => Status::Pass,
        });
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => EXIT_PASS,
            Status::Fail => EXIT_FAIL,
            Status::Inconclusive => EXIT_INCONCLUSIVE,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for h in &self.homology {
            writeln!(out, "H_{} = {}", h.degree, h.group).unwrap();
        }
        for c in &self.comparison {
            let flag = if c.matches { "match" } else { "MISMATCH" };
            writeln!(
                out,
                "H_{} = {}    H^{} = {}    {flag}",
                c.degree, c.holim, c.cohomology_degree, c.cohomology
            )
            .unwrap();
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Inconclusive => "inconclusive",
            };
            writeln!(out, "[{tag}] {}: {}", c.name, c.detail).unwrap();
        }
        for w in &self.witnesses {
            writeln!(out, "witness: {w}").unwrap();
        }
        if !self.checks.is_empty() || !self.comparison.is_empty() {
            let s = match self.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Inconclusive => "inconclusive",
            };
            writeln!(out, "{}: {s}", self.command).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }
}

fn coeff_name(g: &CoeffGroup) -> String {
    match g.modulus() {
        None => "Z".into(),
        Some(q) => format!("Z/{q}"),
    }
}

fn load(common: &Common) -> Result<(SimplicialComplex, CoeffGroup)> {
    let g = CoeffGroup::parse(&common.coeff)?;
    let text = std::fs::read_to_string(&common.input).map_err(|e| Error::Parse {
        line: 0,
        message: format!("cannot read {}: {e}", common.input.display()),
    })?;
    Ok((SimplicialComplex::parse(&text)?, g))
}

fn homology_lines(c: &ChainComplex) -> Result<Vec<GroupLine>> {
    Ok(c.homology()?
        .into_iter()
        .map(|(degree, h)| GroupLine {
            degree,
            group: h.to_string(),
        })
        .collect())
}

pub fn cmd_homology(k: &SimplicialComplex, g: CoeffGroup, which: Which) -> Result<Report> {
    let name = which
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    let c = match which {
        Which::Local => local_config_complex(k, &k.whole(), g),
        Which::LocalObs => local_obs_complex(k, &k.whole(), g)?,
        Which::ExtConfig => extended_config(k, g)?.complex().clone(),
        Which::ExtObs => extended_obs(k, g)?.complex().clone(),
        Which::Deligne => deligne_complex(k, g)?.complex().clone(),
    };
    let mut r = Report::new(format!("homology {name}"), &g);
    r.homology = homology_lines(&c)?;
    Ok(r)
}

pub fn cmd_constant_sheaf(k: &SimplicialComplex, g: CoeffGroup, n: i64) -> Result<Report> {
    if n < 0 {
        return Err(Error::Shape(format!(
            "--degree must be non-negative, got {n}"
        )));
    }
    let a = ChainComplex::concentrated(n, g.group());
    let d = Diagram::constant(star_poset(k).poset(), Variance::Contravariant, &a);
    let h = holim(&d)?;
    let coh = cohomology(k, &k.whole(), g)?;
    let mut r = Report::new(format!("constant-sheaf degree {n}"), &g);
    for deg in 0..=n {
        let lhs = h.homology_at(deg)?.group().clone();
        let cd = n - deg;
        let rhs = coh
            .iter()
            .find(|(d, _)| *d as i64 == cd)
            .map(|(_, x)| x.clone())
            .unwrap_or_else(FgAbGroup::zero);
        r.comparison.push(ComparisonLine {
            degree: deg,
            holim: lhs.to_string(),
            cohomology_degree: cd,
            cohomology: rhs.to_string(),
            matches: lhs.invariants() == rhs.invariants(),
        });
    }
    Ok(r.settle())
}

fn outcome<T>(r: &mut Report, name: &str, res: Result<T>) -> Option<T> {
    match res {
        Ok(x) => Some(x),
        Err(e) => {
            r.check(name, Status::Fail, e.to_string());
            None
        }
    }
}

fn same_homology(a: &ChainComplex, b: &ChainComplex) -> Result<bool> {
    let (ha, hb) = (a.homology()?, b.homology()?);
    let inv = |h: &[(i64, FgAbGroup)]| {
        h.iter()
            .filter(|(_, x)| !x.is_trivial())
            .map(|(n, x)| (*n, x.invariants()))
            .collect::<Vec<_>>()
    };
    Ok(inv(&ha) == inv(&hb))
}

fn table(c: &ChainComplex) -> Result<String> {
    Ok(c.homology()?
        .iter()
        .map(|(n, h)| format!("H_{n} = {h}"))
        .collect::<Vec<_>>()
        .join(", "))
}

fn suite_engine_vs_hand(k: &SimplicialComplex, g: CoeffGroup, r: &mut Report) -> Result<()> {
    let e = extended_config(k, g)?;
    let d = extended_config_direct(k, g)?;
    let iso = labelled_iso(&e, &d.presented);
    r.pass_if(
        "ext-config engine ≅ hand formulas",
        iso.is_ok(),
        iso.err()
            .map_or_else(|| table(e.complex()).unwrap_or_default(), |e| e.to_string()),
    );
    if g.modulus().is_some() {
        let e = extended_obs(k, g)?;
        let d = extended_obs_direct(k, g)?;
        let iso = labelled_iso(&e, &d.presented);
        r.pass_if(
            "ext-obs engine ≅ hand formulas",
            iso.is_ok(),
            iso.err()
                .map_or_else(|| table(e.complex()).unwrap_or_default(), |e| e.to_string()),
        );
    }
    Ok(())
}

fn suite_deligne(k: &SimplicialComplex, g: CoeffGroup, r: &mut Report) -> Result<()> {
    let del = deligne_complex(k, g)?;
    let ext = extended_config_direct(k, g)?;
    let Some(psi) = outcome(r, "ψ is a chain map", psi_map(&del, &ext)) else {
        return Ok(());
    };
    r.pass_if("ψ is a chain map", true, "verified degreewise");
    r.pass_if(
        "ψ is a quasi-isomorphism",
        quasi_iso_check(&psi)?,
        "induced maps on homology are bijective",
    );
    let oracle = cech_deligne(k, g)?;
    r.pass_if(
        "H(Deligne) = H(Čech–Deligne)",
        same_homology(del.complex(), &oracle)?,
        table(&oracle)?,
    );
    r.pass_if(
        "H(ext-config) = H(Deligne)",
        same_homology(ext.complex(), del.complex())?,
        table(ext.complex())?,
    );
    match phi_map(&ext, &del) {
        Ok(phi) => {
            let id = |m: Result<ChainMap>| m.map(|m| m.is_identity()).unwrap_or(false);
            r.pass_if("φ∘ψ = id", id(psi.then(&phi)), "exact matrix identity");
            r.pass_if("ψ∘φ = id", id(phi.then(&psi)), "exact matrix identity");
        }
        Err(e @ (Error::Covering { .. } | Error::Gluing { .. })) => {
            r.witnesses.push(format!("φ not defined: {e}"));
        }
        Err(e) => r.check("φ is a chain map", Status::Fail, e.to_string()),
    }
    Ok(())
}

fn suite_eta(k: &SimplicialComplex, g: CoeffGroup, r: &mut Report) -> Result<()> {
    let et = eta_theta(k, g)?;
    r.pass_if(
        "θ∘η = id",
        et.eta.then(&et.theta)?.is_identity(),
        "exact matrix identity",
    );
    r.pass_if(
        "η∘θ − id = δh + hδ",
        et.h.verify().is_ok(),
        "homotopy identity in every degree",
    );
    r.pass_if(
        "η is a quasi-isomorphism",
        quasi_iso_check(&et.eta)?,
        "induced maps on homology are bijective",
    );
    Ok(())
}

fn suite_zeta(k: &SimplicialComplex, g: CoeffGroup, r: &mut Report) -> Result<()> {
    let zk = homotopy_gauge::gauge::zeta_kappa(k, g)?;
    r.pass_if(
        "ζ∘κ = id",
        zk.kappa.then(&zk.zeta)?.is_identity(),
        "exact matrix identity",
    );
    r.pass_if(
        "κ∘ζ − id = δ*k + kδ*",
        zk.k.verify().is_ok(),
        "homotopy identity in every degree",
    );
    r.pass_if(
        "ζ is a quasi-isomorphism",
        quasi_iso_check(&zk.zeta)?,
        "induced maps on homology are bijective",
    );
    Ok(())
}

/// Vertex transpositions of `K` that are simplicial automorphisms.
fn transpositions(k: &SimplicialComplex) -> Vec<(usize, usize, SimplicialIso)> {
    let n = k.num_vertices();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut map: Vec<usize> = (0..n).collect();
            map.swap(i, j);
            if let Ok(f) = SimplicialIso::new(k, k, map) {
                out.push((i, j, f));
            }
        }
    }
    out
}

fn suite_pairing(
    k: &SimplicialComplex,
    g: CoeffGroup,
    seed: u64,
    budget: usize,
    r: &mut Report,
) -> Result<()> {
    use rand::SeedableRng;
    let ctx = PairingContext::new(k, g)?;
    // bilinearity: generators of both sides decide every pairing identity
    let gens = ctx.cfg.presented.representatives(0).to_vec();
    let bad = gens
        .iter()
        .find_map(|b| ctx.relation_failure(b).transpose().map(|i| (b, i)));
    match bad {
        Some((b, i)) => {
            let i = i?;
            r.check(
                "relations pair to 0 on configuration generators",
                Status::Fail,
                format!("relation {i}"),
            );
            r.witnesses.push(ctx.describe_config(0, b));
        }
        None => r.pass_if(
            "relations pair to 0 on configuration generators",
            true,
            format!(
                "{} relations × {} generators",
                ctx.obs.relations.len(),
                gens.len()
            ),
        ),
    }
    let count = ctx.config_count(0);
    let exhaustive = count.as_ref().is_some_and(|c| *c <= budget.into());
    let samples = if exhaustive {
        ctx.all_configs(0)?
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..budget)
            .map(|_| ctx.random_config(0, &mut rng))
            .collect::<Result<Vec<_>>>()?
    };
    let failures = samples
        .iter()
        .filter(|b| ctx.relation_failure(b).ok().flatten().is_some())
        .count();
    let how = if exhaustive { "exhaustive" } else { "random" };
    r.pass_if(
        "relations pair to 0 on sampled configurations",
        failures == 0,
        format!("{how}, {} configurations", samples.len()),
    );
    let (n0, n1) = (ctx.obs.deg0.ngens(), ctx.cfg.deg1.ngens());
    let adj = (0..n0).all(|i| {
        (0..n1).all(|j| {
            ctx.adjunction_holds(
                &homotopy_gauge::abelian::SparseVec::unit(i),
                &homotopy_gauge::abelian::SparseVec::unit(j),
            )
        })
    });
    r.pass_if(
        "⟨δ*F, B⟩ = ⟨F, δB⟩",
        adj,
        format!("all {n0} × {n1} basis pairs"),
    );
    let mut natural = true;
    let autos = transpositions(k);
    for (_, _, f) in &autos {
        let ff = pushpull_functoriality(f, &ctx, &ctx)?;
        for i in 0..n0 {
            for b in &gens {
                natural &= ff.natural_at(
                    &ctx,
                    &ctx,
                    0,
                    &homotopy_gauge::abelian::SparseVec::unit(i),
                    b,
                )?;
            }
        }
    }
    r.pass_if(
        "naturality under vertex transpositions",
        natural,
        format!("transposition automorphisms checked: {}", autos.len()),
    );
    Ok(())
}

fn suite_separation(
    k: &SimplicialComplex,
    g: CoeffGroup,
    seed: u64,
    budget: usize,
    r: &mut Report,
) -> Result<()> {
    let ctx = PairingContext::new(k, g)?;
    let rep = separation_check(&ctx, seed, budget)?;
    let how = rep
        .exhaustive
        .iter()
        .map(|(d, e)| format!("degree {d} {}", if *e { "exhaustive" } else { "random" }))
        .collect::<Vec<_>>()
        .join(", ");
    let detail = format!("{} nonzero configurations tested ({how})", rep.tested);
    match rep.outcome {
        SeparationOutcome::Separated => r.check(
            "every tested configuration is separated",
            Status::Pass,
            detail,
        ),
        SeparationOutcome::Fails { degree, config } => {
            r.check(
                "every tested configuration is separated",
                Status::Fail,
                detail,
            );
            r.witnesses.push(format!(
                "degree {degree} configuration no observable detects: {config}"
            ));
        }
        SeparationOutcome::Inconclusive { sampled } => r.check(
            "every tested configuration is separated",
            Status::Inconclusive,
            format!(
                "{detail}; a random sample of {sampled} is below {}",
                homotopy_gauge::gauge::MIN_RANDOM_SAMPLE
            ),
        ),
    }
    for w in rep.witnesses.iter().take(20) {
        r.witnesses.push(format!(
            "degree {} [{}] separated by {} with value {}",
            w.degree, w.config, w.observable, w.value
        ));
    }
    Ok(())
}

pub fn cmd_verify(
    k: &SimplicialComplex,
    g: CoeffGroup,
    suite: Suite,
    seed: u64,
    budget: usize,
) -> Result<Report> {
    let name = suite
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    let mut r = Report::new(format!("verify {name}"), &g);
    match suite {
        Suite::EngineVsHand => suite_engine_vs_hand(k, g, &mut r)?,
        Suite::DeligneCompare => suite_deligne(k, g, &mut r)?,
        Suite::Eta => suite_eta(k, g, &mut r)?,
        Suite::Zeta => suite_zeta(k, g, &mut r)?,
        Suite::Pairing => suite_pairing(k, g, seed, budget, &mut r)?,
        Suite::Separation => suite_separation(k, g, seed, budget, &mut r)?,
    }
    Ok(r.settle())
}

/// Parses `args` (program name first) and runs the command; returns the
/// exit code, standard output and standard error.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            return if e.use_stderr() {
                (code, String::new(), text)
            } else {
                (code, text, String::new())
            };
        }
    };
    let (common, result) = match &cli.command {
        Command::Homology { common, which } => (
            common,
            load(common).and_then(|(k, g)| cmd_homology(&k, g, *which)),
        ),
        Command::Verify {
            common,
            suite,
            seed,
            budget,
        } => (
            common,
            load(common).and_then(|(k, g)| cmd_verify(&k, g, *suite, *seed, *budget)),
        ),
        Command::ConstantSheaf { common, degree } => (
            common,
            load(common).and_then(|(k, g)| cmd_constant_sheaf(&k, g, *degree)),
        ),
    };
    match result {
        Ok(r) => (r.exit_code(), r.render(common.format), String::new()),
        Err(e) => (EXIT_USAGE, String::new(), format!("error: {e}\n")),
    }
}
