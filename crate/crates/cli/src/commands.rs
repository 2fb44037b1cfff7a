//! Command dispatch: each command runs the owning core routine and assembles a
//! [`RunReport`].

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use orbitzeta_core::coadjoint::CharacterHandle;
use orbitzeta_core::integrate::{box_measure_formula, lattice_integral_zeta, measure_of_character_box, Restriction};
use orbitzeta_core::liealg::LieAlgebraSpec;
use orbitzeta_core::oracle::kirillov_verify;
use orbitzeta_core::zeta::{
    count_by_radical_at_level, count_by_radical_bounded, equivariant_count, fit_rational, lambda_exact_with,
    lambda_truncated, orbit_truncation, twisted_mu_direct, twisted_mu_galois, LambdaStatus, LambdaTable,
    ZetaPolynomial, DEFAULT_MAX_DEN,
};
use orbitzeta_core::Limits;
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra_file::{AlgebraFile, ParseError};
use crate::cache::LevelCache;
use crate::report::{degree_string, json_int, poly_json, rat_string, val_json, RunReport, SpecSummary, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Validate,
    Lambda,
    ZetaFit,
    Twisted,
    Equivariant,
    KirillovVerify,
    IntegralCheck,
    MeasureCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Lambda => "lambda",
            Command::ZetaFit => "zeta-fit",
            Command::Twisted => "twisted",
            Command::Equivariant => "equivariant",
            Command::KirillovVerify => "kirillov-verify",
            Command::IntegralCheck => "integral-check",
            Command::MeasureCheck => "measure-check",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub imax: Option<u32>,
    pub level: Option<u32>,
    pub element: Option<String>,
    pub samples: Option<usize>,
    pub seed: u64,
    /// `None` disables the level-count cache.
    pub cache_dir: Option<PathBuf>,
    pub limits: Limits,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Core(#[from] orbitzeta_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 invalid algebra, 2 not perfect, 3 resource cap, 4 hypothesis
    /// violation, 5 an internal cross-check failed, 64 usage, 74 I/O.
    pub fn exit_code(&self) -> i32 {
        use orbitzeta_core::Error as E;
        match self {
            CliError::Parse(ParseError::Io { .. }) => 74,
            CliError::Parse(_) => 1,
            CliError::Usage(_) => 64,
            CliError::Core(e) => match e {
                E::InvalidPrime(_)
                | E::DimensionMismatch { .. }
                | E::AntisymmetryViolation { .. }
                | E::JacobiViolation { .. }
                | E::NotUniform
                | E::NotAutomorphism(_) => 1,
                E::NotPerfect => 2,
                E::ResourceCap { .. } | E::LevelOverflow { .. } | E::SeriesDegreeExceeded { .. } => 3,
                E::HypothesisViolation { .. } => 4,
                E::OddExponent(_)
                | E::OrbitSizeMismatch { .. }
                | E::MismatchWithGaloisRoute { .. }
                | E::IrrationalCharacterSum(_)
                | E::NoFit(_)
                | E::InsufficientCoefficients { .. }
                | E::BoxTooDeep { .. }
                | E::Inconsistency(_) => 5,
            },
        }
    }
}

/// Exit code for a report whose verification did not pass.
pub const CHECK_FAILED: i32 = 5;

struct Context<'a> {
    file: &'a AlgebraFile,
    spec: LieAlgebraSpec,
    opts: &'a Options,
    cache: LevelCache,
    echo: BTreeMap<String, Value>,
}

impl Context<'_> {
    fn imax(&mut self, default: u32) -> u32 {
        let v = self.opts.imax.unwrap_or(default);
        self.echo.insert("imax".into(), v.into());
        v
    }

    fn level(&mut self, default: u32) -> u32 {
        let v = self.opts.level.unwrap_or(default);
        self.echo.insert("level".into(), v.into());
        v
    }

    fn samples(&mut self, default: usize) -> usize {
        let v = self.opts.samples.unwrap_or(default);
        self.echo.insert("samples".into(), v.into());
        self.echo.insert("seed".into(), self.opts.seed.into());
        v
    }

    /// Exact `λ_0 … λ_imax` with per-level counts served from the cache.
    fn lambda(&self, imax: u32) -> orbitzeta_core::Result<LambdaTable> {
        let spec = &self.spec;
        let limits = &self.opts.limits;
        lambda_exact_with(spec, imax, 0, &mut |k, max_exp| {
            self.cache
                .get_or_compute(k, Some(max_exp), || count_by_radical_bounded(spec, k, Some(max_exp), limits))
        })
    }
}

pub fn run_command(command: Command, file: &AlgebraFile, opts: &Options) -> Result<RunReport, CliError> {
    let spec = file.to_spec()?;
    let structure = spec.validate()?;
    let mut ctx = Context {
        file,
        spec,
        opts,
        cache: LevelCache::new(opts.cache_dir.as_deref(), &file.structure_json()),
        echo: BTreeMap::new(),
    };
    let (results, table, passed) = match command {
        Command::Validate => validate(&mut ctx),
        Command::Lambda => lambda(&mut ctx),
        Command::ZetaFit => zeta_fit(&mut ctx),
        Command::Twisted => twisted(&mut ctx),
        Command::Equivariant => equivariant(&mut ctx),
        Command::KirillovVerify => kirillov(&mut ctx),
        Command::IntegralCheck => integral_check(&mut ctx),
        Command::MeasureCheck => measure_check(&mut ctx),
    }?;
    Ok(RunReport {
        command: command.name().into(),
        algebra: file.name.clone(),
        options: ctx.echo,
        summary: SpecSummary::new(file.p, file.rank, &structure),
        results,
        passed,
        table,
    })
}

type Outcome = Result<(Value, Table, Option<bool>), CliError>;

fn validate(ctx: &mut Context) -> Outcome {
    let report = ctx.spec.validate()?;
    let rank = ctx.spec.generic_psi_rank();
    let mut notes = Vec::new();
    if report.require_uniform().is_err() {
        notes.push(orbitzeta_core::Error::NotUniform.to_string());
    }
    if !report.perfect {
        notes.push(orbitzeta_core::Error::NotPerfect.to_string());
    }
    if let Err(e) = report.require_correspondence(ctx.spec.p()) {
        notes.push(e.to_string());
    }
    let results = json!({
        "jacobi": true,
        "uniformity": val_json(report.uniformity),
        "perfect": report.perfect,
        "m_l": report.m_l,
        "generic_form_rank": rank,
        "notes": notes,
    });
    let mut table = Table::new(&["property", "value"]);
    table.push(vec!["uniformity".into(), report.uniformity.to_string()]);
    table.push(vec!["perfect".into(), report.perfect.to_string()]);
    table.push(vec![
        "m_l".into(),
        report.m_l.map_or("none".into(), |m| m.to_string()),
    ]);
    table.push(vec!["generic_form_rank".into(), rank.to_string()]);
    Ok((results, table, None))
}

fn status_string(s: LambdaStatus) -> String {
    match s {
        LambdaStatus::Exact => "exact".into(),
        LambdaStatus::LowerBoundAtLevel(k) => format!("lower-bound(k<={k})"),
    }
}

fn lambda(ctx: &mut Context) -> Outcome {
    let imax = ctx.imax(3);
    let perfect = ctx.spec.validate()?.perfect;
    let table = if perfect {
        ctx.lambda(imax)?
    } else {
        let Some(k) = ctx.opts.level else {
            return Err(orbitzeta_core::Error::NotPerfect.into());
        };
        ctx.level(k);
        lambda_truncated(&ctx.spec, imax, k, &ctx.opts.limits)?
    };
    let p = ctx.spec.p();
    let mut csv = Table::new(&["i", "lambda_i", "status"]);
    let entries: Vec<Value> = table
        .entries
        .iter()
        .map(|e| {
            let status = status_string(e.status);
            csv.push(vec![e.i.to_string(), e.value.to_string(), status.clone()]);
            json!({
                "i": e.i,
                "degree": degree_string(p, e.i),
                "lambda": json_int(&BigInt::from(e.value.clone())),
                "status": status,
            })
        })
        .collect();
    let results = json!({ "entries": entries, "zeta": poly_json(&table.zeta()) });
    Ok((results, csv, None))
}

fn zeta_fit(ctx: &mut Context) -> Outcome {
    let imax = ctx.imax(5);
    // One extra coefficient is computed and held out of the fit.
    let table = ctx.lambda(imax + 1)?;
    let values: Vec<BigInt> = table.values().into_iter().map(BigInt::from).collect();
    let fitted = &values[..=imax as usize];
    let max_den = DEFAULT_MAX_DEN.min(fitted.len().saturating_sub(2) / 2);
    let fit = fit_rational(fitted, max_den)?;
    let held_out = &values[imax as usize + 1];
    let predicted = fit.series(imax as usize + 2).pop().expect("nonempty series");
    let pass = predicted == BigRational::from_integer(held_out.clone());
    let ints = |v: &[BigInt]| Value::Array(v.iter().map(json_int).collect());
    let results = json!({
        "num": ints(&fit.numerator),
        "den": ints(&fit.denominator),
        "max_den": max_den,
        "fitted_terms": fitted.len(),
        "validation_window": fit.validation_window,
        "coefficients": ints(&values),
        "held_out": {
            "i": imax + 1,
            "predicted": rat_string(&predicted),
            "actual": json_int(held_out),
            "pass": pass,
        },
    });
    let mut csv = Table::new(&["part", "power", "coefficient"]);
    for (part, coeffs) in [("num", &fit.numerator), ("den", &fit.denominator)] {
        for (i, c) in coeffs.iter().enumerate() {
            csv.push(vec![part.into(), i.to_string(), c.to_string()]);
        }
    }
    Ok((results, csv, Some(pass)))
}

fn twisted(ctx: &mut Context) -> Outcome {
    let imax = ctx.imax(2);
    let name = ctx
        .opts
        .element
        .clone()
        .ok_or_else(|| CliError::Usage("twisted needs --element NAME".into()))?;
    let g = ctx
        .file
        .element(&name)
        .ok_or_else(|| CliError::Usage(format!("no element named `{name}` in the algebra file")))?
        .to_vec();
    ctx.echo.insert("element".into(), name.clone().into());
    let limits = &ctx.opts.limits;
    let direct = twisted_mu_direct(&ctx.spec, &g, imax, limits)?;
    let galois = twisted_mu_galois(&ctx.spec, &g, imax, limits)?;
    let p = ctx.spec.p();
    let mut csv = Table::new(&["i", "degree", "mu_direct", "mu_galois"]);
    for i in 0..=imax {
        csv.push(vec![
            i.to_string(),
            degree_string(p, i),
            rat_string(&direct.coeff(i as usize)),
            rat_string(&galois.coeff(i as usize)),
        ]);
    }
    let padded = |poly: &ZetaPolynomial| -> Value {
        Value::Array((0..=imax).map(|i| rat_string(&poly.coeff(i as usize)).into()).collect())
    };
    let agree = direct == galois;
    let results = json!({
        "element": { "name": name, "coords": g },
        "mu_direct": padded(&direct),
        "mu_galois": padded(&galois),
        "agree": agree,
    });
    Ok((results, csv, Some(agree)))
}

fn equivariant(ctx: &mut Context) -> Outcome {
    let k_max = ctx.level(2);
    let names: Vec<String> = ctx.file.automorphisms.iter().map(|a| a.name.clone()).collect();
    let mats = ctx.file.automorphism_matrices();
    let limits = &ctx.opts.limits;
    let classes = equivariant_count(&ctx.spec, &mats, k_max, limits)?;
    let truncation = orbit_truncation(&ctx.spec, k_max, limits)?;
    let total = classes.values().fold(ZetaPolynomial::default(), |acc, x| acc.add(x));
    let matches = total == truncation;
    let label = |set: &BTreeSet<usize>| -> Vec<String> { set.iter().map(|&t| names[t].clone()).collect() };
    let mut csv = Table::new(&["stabilizing", "coefficients"]);
    let class_json: Vec<Value> = classes
        .iter()
        .map(|(set, poly)| {
            let coeffs: Vec<String> = poly.coeffs().iter().map(rat_string).collect();
            csv.push(vec![label(set).join(" "), coeffs.join(" ")]);
            json!({ "stabilizing": label(set), "poly": poly_json(poly) })
        })
        .collect();
    let results = json!({
        "automorphisms": names,
        "classes": class_json,
        "total": poly_json(&total),
        "truncation": poly_json(&truncation),
        "sum_matches": matches,
    });
    Ok((results, csv, Some(matches)))
}

fn kirillov(ctx: &mut Context) -> Outcome {
    let k = ctx.level(2);
    let samples = ctx.samples(1000);
    let report = kirillov_verify(&ctx.spec, k, samples, ctx.opts.seed, &ctx.opts.limits)?;
    let mut csv = Table::new(&["check", "pass", "detail"]);
    for c in &report.checks {
        csv.push(vec![c.check.clone(), c.pass.to_string(), c.detail.clone()]);
    }
    let passed = report.all_passed();
    Ok((serde_json::to_value(&report).expect("reports serialize"), csv, Some(passed)))
}

fn integral_check(ctx: &mut Context) -> Outcome {
    let e = ctx.level(3);
    let limits = &ctx.opts.limits;
    let integral = lattice_integral_zeta(&ctx.spec, e, &Restriction::None, limits)?;
    let mut direct = ZetaPolynomial::default();
    for j in 1..=e {
        let counts = ctx
            .cache
            .get_or_compute(j, None, || count_by_radical_at_level(&ctx.spec, j, limits))?;
        for (m, c) in counts {
            direct.add_term(m as usize, &BigRational::from_integer(c.into()));
        }
    }
    let len = integral.poly.len().max(direct.len());
    let mut csv = Table::new(&["exponent", "integral", "direct", "certified", "pass"]);
    let mut all = true;
    let rows: Vec<Value> = (0..len)
        .map(|m| {
            let a = integral.poly.coeff(m);
            let b = direct.coeff(m);
            let pass = a == b;
            all &= pass;
            let certified = integral.certified_max_exponent.is_some_and(|c| m as u32 <= c);
            csv.push(vec![
                m.to_string(),
                rat_string(&a),
                rat_string(&b),
                certified.to_string(),
                pass.to_string(),
            ]);
            json!({
                "exponent": m,
                "integral": rat_string(&a),
                "direct": rat_string(&b),
                "certified": certified,
                "pass": pass,
            })
        })
        .collect();
    let results = json!({
        "certified_max_exponent": integral.certified_max_exponent,
        "coefficients": rows,
    });
    Ok((results, csv, Some(all)))
}

fn measure_check(ctx: &mut Context) -> Outcome {
    let e = ctx.level(3);
    if e < 2 {
        return Err(CliError::Usage("measure-check needs --level of at least 2".into()));
    }
    let samples = ctx.samples(20);
    let spec = &ctx.spec;
    let p = spec.p();
    let n = spec.dim();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ctx.opts.seed);
    let mut csv = Table::new(&["w", "order_exp", "measure", "formula", "pass"]);
    let mut all = true;
    let mut rows = Vec::with_capacity(samples);
    while rows.len() < samples {
        let k = rng.gen_range(1..e);
        let q = spec.ctx().pow(k);
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        let w = CharacterHandle::normalize(&a, k, spec.ctx());
        if w.level() != k {
            continue;
        }
        let measure = measure_of_character_box(spec, &w, e)?;
        let formula = box_measure_formula(p, n, k);
        let pass = measure == formula;
        all &= pass;
        let coords: Vec<String> = w.a().iter().map(|x| x.to_string()).collect();
        csv.push(vec![
            coords.join(" "),
            k.to_string(),
            rat_string(&measure),
            rat_string(&formula),
            pass.to_string(),
        ]);
        rows.push(json!({
            "w": w.a(),
            "order_exp": k,
            "measure": rat_string(&measure),
            "formula": rat_string(&formula),
            "pass": pass,
        }));
    }
    Ok((json!({ "samples": rows }), csv, Some(all)))
}
