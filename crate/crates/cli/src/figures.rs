//! Figure recipes: each emits one CSV (`series,x,estimate,ci_low,ci_high`)
//! and optionally a minimal SVG line plot.

use crate::fmt::sig12;
use crate::{init_workers, write_text, CliError, FigureArgs};
use subuni::analytics::asymptotic_threshold;
use subuni::copula::CopulaModel;
use subuni::mc::{estimate_threshold, scan_subuniformity, SimulationPlan};
use subuni::merge::{MergeStatistic, Weights};

struct Row {
    series: String,
    x: f64,
    est: f64,
    lo: f64,
    hi: f64,
}

fn hmp(n: usize) -> MergeStatistic {
    MergeStatistic::rmean(-1.0, Weights::equal(n)).expect("equal weights")
}

fn plan(a: &FigureArgs, default_reps: u64) -> SimulationPlan {
    SimulationPlan::new(a.seed, a.reps.unwrap_or(default_reps))
        .with_chunks(a.chunks)
        .with_level(a.level)
}

/// One scan point: R_n(p) for a model at a single p.
fn rn_point(
    plan: &SimulationPlan,
    model: CopulaModel,
    p: f64,
    series: &str,
    x: f64,
) -> Result<Row, CliError> {
    let model = model.validate()?;
    let stat = hmp(model.dimension());
    let row = &scan_subuniformity(plan, &model, &stat, &[p])?[0];
    Ok(Row {
        series: series.to_string(),
        x,
        est: row.estimate.value,
        lo: row.estimate.ci_low,
        hi: row.estimate.ci_high,
    })
}

fn fig_gauss(a: &FigureArgs) -> Result<Vec<Row>, CliError> {
    let plan = plan(a, 200_000);
    let mut rows = Vec::new();
    for &n in &[5usize, 10, 15, 20] {
        for k in 0..=10 {
            let rho = k as f64 / 10.0;
            rows.push(rn_point(
                &plan,
                CopulaModel::GaussEquicorr { n, rho },
                0.1,
                &format!("n={n}"),
                rho,
            )?);
        }
    }
    Ok(rows)
}

fn fig_clayton(a: &FigureArgs) -> Result<Vec<Row>, CliError> {
    let plan = plan(a, 200_000);
    let n = 10;
    let mut rows = Vec::new();
    for k in 0..=15 {
        let t = k as f64 * 0.1;
        let model = if t == 0.0 {
            CopulaModel::Independence { n }
        } else {
            CopulaModel::Clayton { n, t }
        };
        rows.push(rn_point(&plan, model, 0.1, &format!("n={n}"), t)?);
    }
    Ok(rows)
}

fn fig_tcopula(a: &FigureArgs) -> Result<Vec<Row>, CliError> {
    let plan = plan(a, 200_000);
    let n = 10;
    let mut rows = Vec::new();
    for k in 0..=10 {
        let rho = k as f64 / 10.0;
        rows.push(rn_point(
            &plan,
            CopulaModel::TEquicorr { n, rho, df: 4.0 },
            0.1,
            "df=4",
            rho,
        )?);
    }
    Ok(rows)
}

fn fig_gumbel(a: &FigureArgs) -> Result<Vec<Row>, CliError> {
    let plan = plan(a, 200_000);
    let n = 10;
    let mut rows = Vec::new();
    for k in 0..=18 {
        let theta = 1.0 + k as f64 * 0.5;
        rows.push(rn_point(
            &plan,
            CopulaModel::Gumbel { n, theta },
            0.1,
            &format!("n={n}"),
            theta,
        )?);
    }
    Ok(rows)
}

fn fig_discrete(a: &FigureArgs) -> Result<Vec<Row>, CliError> {
    let plan = plan(a, 200_000);
    let n = 10;
    let grid: Vec<f64> = (1..=19).map(|k| k as f64 * 0.05).collect();
    let mut rows = Vec::new();
    let mut scan_into = |model: CopulaModel, series: &str| -> Result<(), CliError> {
        let model = model.validate()?;
        let stat = hmp(n);
        for row in scan_subuniformity(&plan, &model, &stat, &grid)? {
            rows.push(Row {
                series: series.to_string(),
                x: row.p,
                est: row.estimate.value,
                lo: row.estimate.ci_low,
                hi: row.estimate.ci_high,
            });
        }
        Ok(())
    };
    for &m in &[5u64, 20, 50] {
        scan_into(
            CopulaModel::Discretized {
                base: Box::new(CopulaModel::Independence { n }),
                m,
            },
            &format!("m={m}"),
        )?;
    }
    scan_into(CopulaModel::Independence { n }, "continuous")?;
    Ok(rows)
}

fn fig_threshold(a: &FigureArgs) -> Result<Vec<Row>, CliError> {
    let plan = plan(a, 100_000);
    let ns = [100usize, 200, 500, 1000, 2000, 5000];
    let mut rows = Vec::new();
    for &p in &[0.01, 0.05, 0.1] {
        for &n in &ns {
            let model = CopulaModel::Independence { n }.validate()?;
            let est = estimate_threshold(&plan, &model, &hmp(n), p)?;
            rows.push(Row {
                series: format!("empirical p={p}"),
                x: n as f64,
                est: est.value,
                lo: est.ci_low,
                hi: est.ci_high,
            });
            let asy = asymptotic_threshold(n, p)?;
            rows.push(Row {
                series: format!("asymptotic p={p}"),
                x: n as f64,
                est: asy,
                lo: asy,
                hi: asy,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_figure(a: FigureArgs) -> Result<(), CliError> {
    init_workers(a.workers)?;
    let rows = match a.name.as_str() {
        "gauss" => fig_gauss(&a)?,
        "clayton" => fig_clayton(&a)?,
        "tcopula" => fig_tcopula(&a)?,
        "gumbel" => fig_gumbel(&a)?,
        "discrete" => fig_discrete(&a)?,
        "threshold" => fig_threshold(&a)?,
        other => return Err(CliError::Usage(format!("unknown figure recipe {other:?}"))),
    };
    std::fs::create_dir_all(&a.out_dir)?;
    let mut csv = String::from("series,x,estimate,ci_low,ci_high\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            r.series,
            sig12(r.x),
            sig12(r.est),
            sig12(r.lo),
            sig12(r.hi)
        ));
    }
    let path = format!("{}/figure_{}.csv", a.out_dir, a.name);
    write_text(Some(&path), &csv)?;
    if a.svg {
        let svg = render_svg(&rows);
        write_text(Some(&format!("{}/figure_{}.svg", a.out_dir, a.name)), &svg)?;
    }
    Ok(())
}

/// Bare-bones multi-series line plot; convenience only.
fn render_svg(rows: &[Row]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const PAD: f64 = 40.0;
    const COLORS: [&str; 8] = [
        "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
    ];
    let (mut x0, mut x1) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY);
    for r in rows {
        x0 = x0.min(r.x);
        x1 = x1.max(r.x);
        y0 = y0.min(r.lo);
        y1 = y1.max(r.hi);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut series: Vec<&str> = Vec::new();
    for r in rows {
        if !series.contains(&r.series.as_str()) {
            series.push(&r.series);
        }
    }
    let mut body = String::new();
    body.push_str(&format!(
        "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
        W - 2.0 * PAD,
        H - 2.0 * PAD
    ));
    for (si, name) in series.iter().enumerate() {
        let pts: String = rows
            .iter()
            .filter(|r| r.series == *name)
            .map(|r| format!("{:.1},{:.1} ", sx(r.x), sy(r.est)))
            .collect();
        let color = COLORS[si % COLORS.len()];
        body.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            pts.trim_end()
        ));
        body.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{color}\">{name}</text>\n",
            W - PAD - 120.0,
            PAD + 14.0 * (si as f64 + 1.0)
        ));
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n{body}</svg>\n"
    )
}
