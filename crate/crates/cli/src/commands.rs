use std::path::Path;

use serde_json::Value;
use ses_core::availability::{
    adiabatic_availability, availability_function, available_energy, ergotropy, ExtendedState, Reservoir, ReservoirKind,
};
use ses_core::diagram::{annotate, ses_curve};
use ses_core::equilibrium::{beta_of_energy, max_entropy_at, thermal_properties};
use ses_core::interactions::{clausius_cycle_check, transfer_bounds, Endpoint, ExchangeProposal};
use ses_core::opensys::grand_properties;
use ses_core::partitioning::{evaluate_scenario, PartitionModel, PartitionScenario};
use ses_core::spectra::{build_box, build_finite, build_oscillator, build_oscillator_auto, BoxGeometry};
use ses_core::{verify as suites, EnergyInversion, Error, Result};

use crate::output::{json_number, Cell, Table};
use crate::{inputs, AvailArgs, BoundsArgs, BuildArgs, Ctx, DiagramArgs, GrandArgs, PartitionArgs, PartitionModelArg};
use crate::{Report, SpectrumKind, VerifyArgs};

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidInput(format!("--{flag} is required for this kind")))
}

fn number(s: &str, what: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::InvalidInput(format!("{what}: '{s}' is not a number")))
}

fn numbers(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',').map(|x| number(x, what)).collect()
}

pub fn spectrum_build(ctx: &Ctx, a: &BuildArgs) -> Result<String> {
    let units = ctx.cfg.unit_system();
    let model = match a.kind {
        SpectrumKind::Finite => {
            let spec = need(a.levels.as_deref(), "levels")?;
            let levels = spec
                .split(',')
                .map(|pair| {
                    let (e, g) = pair.split_once(':').unwrap_or((pair, "1"));
                    Ok((number(e, "level energy")?, number(g, "level degeneracy")?))
                })
                .collect::<Result<Vec<_>>>()?;
            build_finite(&levels)?
        }
        SpectrumKind::Oscillator => {
            let hnu = need(a.hnu, "hnu")?;
            match a.count {
                Some(n) => build_oscillator(hnu, n, a.t_max)?,
                None => build_oscillator_auto(hnu, a.t_max.unwrap_or(10.0 * hnu), a.tail_tol)?,
            }
        }
        SpectrumKind::Box => {
            let sides = numbers(need(a.sides.as_deref(), "sides")?, "sides")?;
            let sides = match sides.as_slice() {
                [l] => [*l; 3],
                [x, y, z] => [*x, *y, *z],
                _ => return Err(Error::InvalidInput("--sides takes one or three lengths".into())),
            };
            let geom = BoxGeometry::new(need(a.mass, "mass")?, sides)?;
            build_box(&geom, need(a.cutoff, "cutoff")?, &units, a.t_max)?
        }
    };
    let model = match &a.label {
        Some(l) => model.with_label(l.clone()),
        None => model,
    };
    Ok(model.to_json_string() + "\n")
}

pub fn state_info(ctx: &Ctx, path: &Path) -> Result<String> {
    let st = inputs::state(path)?;
    let s_ses = max_entropy_at(st.spectrum().as_ref(), st.energy())?;
    let mut t = Table::new(&["E", "S", "variance", "D"]);
    t.push(vec![st.energy().into(), st.entropy().into(), st.variance().into(), (s_ses - st.entropy()).max(0.0).into()]);
    Ok(t.render(ctx.format()))
}

fn grid(spec: &str, log: bool) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(Error::InvalidInput(format!("b grid '{spec}' must be lo:hi:n")));
    };
    let (lo, hi) = (number(lo, "b grid")?, number(hi, "b grid")?);
    let n: usize = n.trim().parse().map_err(|_| Error::InvalidInput(format!("b grid count '{n}'")))?;
    if n == 0 || !(lo <= hi) {
        return Err(Error::InvalidInput("b grid needs lo <= hi and n >= 1".into()));
    }
    if log && !(lo > 0.0) {
        return Err(Error::InvalidInput("a log b grid needs lo > 0".into()));
    }
    let at = |i: usize| {
        let f = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
        if log {
            (lo.ln() + f * (hi.ln() - lo.ln())).exp()
        } else {
            lo + f * (hi - lo)
        }
    };
    Ok((0..n).map(at).collect())
}

pub fn eq_table(ctx: &Ctx, spectrum: &Path, b_grid: &str, log: bool) -> Result<String> {
    let sp = inputs::spectrum(spectrum)?;
    let mut t = Table::new(&["b", "T", "lnQ", "E", "S", "variance", "C"]);
    for b in grid(b_grid, log)? {
        let p = thermal_properties(sp.as_ref(), b)?;
        t.push(vec![
            b.into(),
            p.temperature().into(),
            p.ln_q.into(),
            p.energy.into(),
            p.entropy.into(),
            p.variance.into(),
            p.heat_capacity.into(),
        ]);
    }
    Ok(t.render(ctx.format()))
}

pub fn eq_invert(ctx: &Ctx, spectrum: &Path, energy: f64) -> Result<String> {
    let sp = inputs::spectrum(spectrum)?;
    let inv = beta_of_energy(sp.as_ref(), energy)?;
    let b = match inv {
        EnergyInversion::Beta(b) => b,
        EnergyInversion::Ground => f64::INFINITY,
        EnergyInversion::Ceiling => f64::NEG_INFINITY,
    };
    let s = max_entropy_at(sp.as_ref(), energy)?;
    let mut t = Table::new(&["E", "b", "T", "S"]);
    t.push(vec![energy.into(), b.into(), inv.temperature().into(), s.into()]);
    Ok(t.render(ctx.format()))
}

pub fn grand(ctx: &Ctx, a: &GrandArgs) -> Result<String> {
    let model = inputs::grand_model(&a.model)?;
    let g = grand_properties(&model, a.b, a.mu)?;
    let mut t = Table::new(&["b", "mu", "lnQ", "n", "E", "S", "p", "Eu"]);
    t.push(vec![
        g.b.into(),
        g.mu.into(),
        g.ln_q.into(),
        g.n.into(),
        g.energy.into(),
        g.entropy.into(),
        g.pressure.into(),
        g.euler.into(),
    ]);
    Ok(t.render(ctx.format()))
}

fn reservoir(spec: &str, kind: &str) -> Result<Reservoir> {
    let kind: ReservoirKind = kind.parse()?;
    let v = numbers(spec, "reservoir")?;
    let (t, rest) = v.split_first().ok_or_else(|| Error::InvalidInput("empty --reservoir".into()))?;
    let mut rest = rest.iter().copied();
    let p = if kind.exchanges_volume() { rest.next() } else { None };
    let mu = if kind.exchanges_amount() { rest.next() } else { None };
    if rest.next().is_some() {
        let quantity = if kind.exchanges_volume() { "amount" } else { "volume" };
        return Err(Error::KindMismatch { kind: kind.name(), quantity });
    }
    Reservoir::new(kind, *t, p, mu)
}

pub fn avail(ctx: &Ctx, a: &AvailArgs) -> Result<String> {
    let st = inputs::state(&a.state)?;
    let psi = adiabatic_availability(&st)?;
    let erg = ergotropy(&st);
    let (omega, value) = match &a.reservoir {
        Some(spec) => {
            let r = reservoir(spec, &a.kind)?;
            let omega = match r.kind() {
                ReservoirKind::FixedVn => Cell::Num(available_energy(&st, &r)?),
                _ => Cell::Empty,
            };
            let x = ExtendedState::new(st.clone(), a.volume, a.amount)?;
            (omega, Cell::Num(availability_function(&x, &r)?))
        }
        None => (Cell::Empty, Cell::Empty),
    };
    let mut t = Table::new(&["E", "S", "psi", "ergotropy", "omega", "A_value"]);
    t.push(vec![st.energy().into(), st.entropy().into(), psi.into(), erg.into(), omega, value]);
    Ok(t.render(ctx.format()))
}

pub fn interact_bounds(ctx: &Ctx, a: &BoundsArgs) -> Result<String> {
    let endpoint = |t: f64, p: Option<f64>, mu: Option<f64>| Endpoint { temperature: t, pressure: p, mu };
    let proposal = ExchangeProposal { de: a.de, ds: a.ds, dv: a.dv, dn: a.dn };
    let b = transfer_bounds(&endpoint(a.ta, a.pa, a.mua), &endpoint(a.tb, a.pb, a.mub), &proposal)?;
    let mut t = Table::new(&["lower", "upper", "admissible"]);
    t.push(vec![b.lower.into(), b.upper.into(), b.admissible.into()]);
    Ok(t.render(ctx.format()))
}

pub fn interact_cycle(ctx: &Ctx, records: &Path) -> Result<String> {
    let v = clausius_cycle_check(&inputs::heat_records(records)?)?;
    let mut t = Table::new(&["sum_Q_over_T", "satisfied"]);
    t.push(vec![v.lhs.into(), v.satisfied.into()]);
    Ok(t.render(ctx.format()))
}

pub fn partition(ctx: &Ctx, a: &PartitionArgs) -> Result<String> {
    let sc = PartitionScenario {
        particles: a.n,
        volume: a.volume,
        t_ab: a.t,
        lambda: a.lambda,
        model: match a.model {
            PartitionModelArg::Closed => PartitionModel::ClosedForm,
            PartitionModelArg::Numeric => PartitionModel::Numeric,
        },
        mass: a.mass,
        units: ctx.cfg.unit_system(),
    };
    let r = evaluate_scenario(&sc)?;
    let mut t = Table::new(&["lambda", "S_irr", "W_min", "subdivision_potential"]);
    t.push(vec![(r.lambda as f64).into(), r.s_irr.into(), r.w_min.into(), r.subdivision_potential.into()]);
    Ok(t.render(ctx.format()))
}

/// Rewrite every number with 12 significant digits.
fn rounded(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) => json_number(x),
            None => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(rounded).collect()),
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, v)| (k, rounded(v))).collect()),
        other => other,
    }
}

pub fn diagram(ctx: &Ctx, a: &DiagramArgs) -> Result<String> {
    let sp = inputs::spectrum(&a.spectrum)?;
    let curve = ses_curve(&sp, a.points, a.negative)?;
    let mut t = Table::new(&["S", "E", "b", "T"]);
    for p in &curve.points {
        t.push(vec![p.entropy.into(), p.energy.into(), p.b.into(), p.temperature.into()]);
    }
    let mut out = t.render(ctx.format());
    if let Some(path) = &a.annotate {
        let st = inputs::state(path)?;
        let r = a.tr.map(Reservoir::thermal).transpose()?;
        let ann = annotate(&st, r.as_ref())?;
        let v = rounded(serde_json::to_value(ann).expect("annotation serializes"));
        out.push('\n');
        out.push_str(&serde_json::to_string_pretty(&v).expect("annotation serializes"));
        out.push('\n');
    }
    Ok(out)
}

pub fn verify(ctx: &Ctx, a: &VerifyArgs) -> Result<Report> {
    let report = suites::run(a.suite.as_deref(), ctx.cfg.seed)?;
    let mut t = Table::new(&["suite", "passed", "failed"]);
    for s in &report.suites {
        t.push(vec![Cell::Text(s.name.clone()), (s.passed as f64).into(), (s.failed as f64).into()]);
    }
    let passed: usize = report.suites.iter().map(|s| s.passed).sum();
    t.push(vec![Cell::Text("total".into()), (passed as f64).into(), (report.failed() as f64).into()]);
    Ok(Report { body: t.render(ctx.format()), failed: report.failed() > 0 })
}
