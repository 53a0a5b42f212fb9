//! One function per subcommand: resolved config in, tables out.

use twoway_secrecy::fullduplex::{self, PowerSweep};
use twoway_secrecy::halfduplex::{self, HgSweep, HmSweep};
use twoway_secrecy::nearfield::optimize::{OptimizedRates, StatsRecord};
use twoway_secrecy::nearfield::{
    self, theta_grid, ClassifierVariant, Event, SecrecyRateReport, TdmScenario, TwoWayScenario,
};
use twoway_secrecy::{boundary_samples, GaussianChannel, ModuloChannel, RateRegion};

use crate::config::*;
use crate::table::{Metadata, ResultTable};
use crate::CliError;

/// Main table plus an optional audit table of simulation statistics.
pub struct Output {
    pub table: ResultTable,
    pub stats: Option<ResultTable>,
}

fn region_table(
    meta: Metadata,
    curves: &[(&str, RateRegion)],
    samples: Option<usize>,
) -> Result<ResultTable, CliError> {
    let mut t = ResultTable::new(meta, &["curve", "point", "r1", "r2"]);
    for (i, (name, region)) in curves.iter().enumerate() {
        let points = match samples {
            Some(n) => boundary_samples(region, n)?,
            None => region.vertices().to_vec(),
        };
        for (j, p) in points.iter().enumerate() {
            t.push(vec![i as f64, j as f64, p.r1, p.r2]);
        }
        t.note(format!("curve.{i}"), name);
        t.note(format!("curve.{i}.max_r1"), region.max_r1());
        t.note(format!("curve.{i}.max_r2"), region.max_r2());
        t.note(format!("curve.{i}.max_sum"), region.max_sum());
    }
    Ok(t)
}

pub fn region_fd_modulo(c: &FdModuloConfig, meta: Metadata) -> Result<Output, CliError> {
    let ch = ModuloChannel::new(c.eps1, c.eps2, c.eps_e)?;
    let curves = [
        (
            "channel prefixing, binning and key sharing",
            fullduplex::fm_region(&ch, c.step)?,
        ),
        ("no channel prefixing", fullduplex::fm_no_prefix_region(&ch)),
    ];
    let mut table = region_table(meta, &curves, c.boundary_samples)?;
    let (p1, p2) = fullduplex::fm_corner_points(&ch);
    table.note("corner.r1", p1.r1);
    table.note("corner.r2", p2.r2);
    Ok(Output { table, stats: None })
}

fn gaussian(ge1: f64, ge2: f64, rho1: f64, rho2: f64) -> Result<GaussianChannel, CliError> {
    Ok(GaussianChannel::new(ge1, ge2, rho1, rho2)?)
}

pub fn region_fd_gaussian(c: &FdGaussianConfig, meta: Metadata) -> Result<Output, CliError> {
    let ch = gaussian(c.ge1, c.ge2, c.rho1, c.rho2)?;
    let sweep = PowerSweep {
        budget_steps: c.budget_steps,
        codeword_steps: c.codeword_steps,
    };
    let curves = [
        (
            "artificial noise, binning and key sharing",
            fullduplex::fg_region(&ch, &sweep)?,
        ),
        (
            "no artificial noise",
            fullduplex::fg_no_prefix_region(&ch, &sweep)?,
        ),
        (
            "one user encodes, the other jams",
            fullduplex::fg_jam_one_region(&ch, &sweep)?,
        ),
    ];
    Ok(Output {
        table: region_table(meta, &curves, c.boundary_samples)?,
        stats: None,
    })
}

pub fn region_hd_modulo(c: &HdModuloConfig, meta: Metadata) -> Result<Output, CliError> {
    let ch = ModuloChannel::new(c.eps1, c.eps2, c.eps_e)?;
    let sweep = HmSweep {
        prefix_step: c.prefix_step,
        input_step: c.input_step,
        sched_step: c.sched_step,
    };
    let curves = [
        ("randomized scheduling", halfduplex::hm_region(&ch, &sweep)?),
        (
            "deterministic scheduling",
            halfduplex::hd_deterministic_region(&ch, &sweep)?,
        ),
    ];
    Ok(Output {
        table: region_table(meta, &curves, c.boundary_samples)?,
        stats: None,
    })
}

pub fn region_hd_gaussian(c: &HdGaussianConfig, meta: Metadata) -> Result<Output, CliError> {
    let ch = gaussian(c.ge1, c.ge2, c.rho1, c.rho2)?;
    let sweep = HgSweep {
        sched_step: c.sched_step,
        power_steps: c.power_steps,
        codeword_steps: c.codeword_steps,
    };
    let fd = PowerSweep {
        budget_steps: c.full_duplex_steps,
        codeword_steps: c.full_duplex_steps,
    };
    let curves = [
        ("randomized scheduling", halfduplex::hg_region(&ch, &sweep)?),
        ("full duplex", fullduplex::fg_region(&ch, &fd)?),
    ];
    Ok(Output {
        table: region_table(meta, &curves, c.boundary_samples)?,
        stats: None,
    })
}

pub fn compare_gaussian(c: &CompareGaussianConfig, meta: Metadata) -> Result<Output, CliError> {
    let ch = gaussian(c.ge1, c.ge2, c.rho1, c.rho2)?;
    let sweep = PowerSweep {
        budget_steps: c.budget_steps,
        codeword_steps: c.codeword_steps,
    };
    let curves = [
        (
            "artificial noise, binning and key sharing",
            fullduplex::fg_region(&ch, &sweep)?,
        ),
        (
            "binning and key sharing only",
            fullduplex::fg_no_prefix_region(&ch, &sweep)?,
        ),
        (
            "cooperative jamming with key exchange (R*)",
            fullduplex::he_yener_region(&ch, c.alpha_step)?,
        ),
        (
            "backward key sharing (R-dagger)",
            fullduplex::backward_key_region(&ch, c.alpha_step)?,
        ),
    ];
    let mut table = region_table(meta, &curves, c.boundary_samples)?;
    let (s1, s2) = fullduplex::he_yener_rates(&ch, c.alpha_step)?;
    let (d1, d2) = fullduplex::backward_key_rates(&ch, c.alpha_step)?;
    table.note("r1_star", s1);
    table.note("r2_star", s2);
    table.note("r1_dagger", d1);
    table.note("r2_dagger", d2);
    Ok(Output { table, stats: None })
}

const CURVE_COLUMNS: [&str; 10] = [
    "theta",
    "d_ae",
    "d_be",
    "ratio",
    "r_s",
    "param",
    "r_m",
    "r_ea",
    "r_eb",
    "worst_variant",
];

fn variant_code(v: Option<ClassifierVariant>) -> f64 {
    v.map_or(-1.0, |v| v.index() as f64)
}

fn curve_table(meta: Metadata, res: &OptimizedRates, param: &str) -> ResultTable {
    let mut t = ResultTable::new(meta, &CURVE_COLUMNS);
    for p in &res.curve {
        let b = &p.best;
        t.push(vec![
            p.theta,
            p.d_ae,
            p.d_be,
            p.ratio,
            b.r_s,
            b.param,
            b.r_m,
            b.r_ea,
            b.r_eb,
            variant_code(b.worst_variant),
        ]);
    }
    t.note("param", param);
    for v in ClassifierVariant::ALL {
        t.note(format!("variant.{}", v.index()), v.name());
    }
    note_report(&mut t, "overall", &res.overall);
    t
}

fn note_report(t: &mut ResultTable, prefix: &str, r: &SecrecyRateReport) {
    t.note(format!("{prefix}.r_s"), r.r_s);
    t.note(format!("{prefix}.param"), r.param);
    t.note(format!("{prefix}.r_m"), r.r_m);
    t.note(format!("{prefix}.r_ea"), r.r_ea);
    t.note(format!("{prefix}.r_eb"), r.r_eb);
    t.note(format!("{prefix}.policy_index"), r.policy_index);
    if let Some(theta) = r.worst_theta {
        t.note(format!("{prefix}.worst_theta"), theta);
    }
    if let Some(v) = r.worst_variant {
        t.note(format!("{prefix}.worst_variant"), v);
    }
}

fn twoway_stats_table(
    meta: Metadata,
    records: &[StatsRecord],
    variants: &[ClassifierVariant],
) -> Result<ResultTable, CliError> {
    let mut cols = vec!["theta".to_string(), "policy".into(), "variant".into()];
    for t in Event::ALL {
        for d in Event::ALL {
            cols.push(format!("p_{}_to_{}", t.label(), d.label()));
        }
    }
    cols.extend(["pe_ab_to_a".into(), "pe_ab_to_b".into(), "trials".into()]);
    let refs: Vec<&str> = cols.iter().map(String::as_str).collect();
    let mut table = ResultTable::new(meta, &refs);
    for r in records {
        for &v in variants {
            let s = r.tally.twoway_stats(v)?;
            let mut row = vec![r.theta, r.policy_index as f64, v.index() as f64];
            for t in Event::ALL {
                for d in Event::ALL {
                    row.push(s.get(t, d));
                }
            }
            row.extend([s.p_e_ab_to_a.get(), s.p_e_ab_to_b.get(), s.trials as f64]);
            table.push(row);
        }
    }
    Ok(table)
}

fn tdm_stats_table(
    meta: Metadata,
    records: &[StatsRecord],
    variants: &[ClassifierVariant],
) -> Result<ResultTable, CliError> {
    let mut table = ResultTable::new(
        meta,
        &[
            "theta",
            "policy",
            "reverse",
            "variant",
            "p_m",
            "p_f",
            "p_e_given_m",
            "se_m",
            "se_f",
            "se_e_given_m",
            "trials",
        ],
    );
    for r in records {
        for &v in variants {
            let s = r.tally.tdm_stats(v)?;
            table.push(vec![
                r.theta,
                r.policy_index as f64,
                r.reverse as u8 as f64,
                v.index() as f64,
                s.p_m.get(),
                s.p_f.get(),
                s.p_e_given_m.get(),
                s.se_m,
                s.se_f,
                s.se_e_given_m,
                r.tally.trials as f64,
            ]);
        }
    }
    Ok(table)
}

fn param_grid(step: f64, interior: bool) -> Vec<f64> {
    let pts = unit_points(step);
    if interior {
        pts[1..pts.len() - 1].to_vec()
    } else {
        pts
    }
}

pub fn sim_twoway(c: &TwoWaySimConfig, meta: Metadata) -> Result<Output, CliError> {
    if c.trials == 0 {
        return Err(CliError::Config("trials: must be positive".into()));
    }
    let sc = TwoWayScenario {
        geometry: c.geometry.build()?,
        thetas: theta_grid(c.geometry.thetas),
        policies: c
            .policies
            .iter()
            .map(PolicyConfig::build)
            .collect::<Result<_, _>>()?,
        pt_grid: param_grid(c.pt_step, true),
        variants: parse_variants(&c.variants)?,
        trials: c.trials,
        seed: c.seed,
        noiseless_main: c.noiseless_main,
    };
    let res = nearfield::optimize_twoway(&sc)?;
    Ok(Output {
        table: curve_table(meta.clone(), &res, "p_t"),
        stats: Some(twoway_stats_table(meta, &res.stats, &sc.variants)?),
    })
}

pub fn sim_tdm(c: &TdmSimConfig, meta: Metadata) -> Result<Output, CliError> {
    if c.trials == 0 {
        return Err(CliError::Config("trials: must be positive".into()));
    }
    let policies = c
        .policies
        .iter()
        .map(|p| Ok((p.data.build()?, p.feedback.build()?)))
        .collect::<Result<_, CliError>>()?;
    let sc = TdmScenario {
        geometry: c.geometry.build()?,
        thetas: theta_grid(c.geometry.thetas),
        policies,
        beta_grid: param_grid(c.beta_step, false),
        variants: parse_variants(&c.variants)?,
        trials: c.trials,
        seed: c.seed,
        noiseless_main: c.noiseless_main,
    };
    let res = nearfield::optimize_tdm(&sc)?;
    Ok(Output {
        table: curve_table(meta.clone(), &res, "beta"),
        stats: Some(tdm_stats_table(meta, &res.stats, &sc.variants)?),
    })
}

pub fn asymptote(c: &AsymptoteConfig, meta: Metadata) -> Result<Output, CliError> {
    check_step_value(c.pt_step)?;
    let r = nearfield::asymptotic_rmax(
        &unit_points(c.pt_step),
        c.rho_min,
        c.d_ab,
        c.alpha_pl,
        c.noiseless_main,
    )?;
    let mut table = ResultTable::new(meta, &["r_max", "p_t", "r_m", "r_e"]);
    table.push(vec![r.r_s, r.param, r.r_m, r.r_ea]);
    Ok(Output { table, stats: None })
}

fn check_step_value(step: f64) -> Result<(), CliError> {
    if step > 0.0 && step <= 0.5 {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "pt_step: step {step} is not in (0, 0.5]"
        )))
    }
}
