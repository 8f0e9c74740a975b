use std::collections::BTreeSet;

use freechaos::kernel_io::TextCoefficient;
use freechaos::laws::DEFAULT_TOL as QUADRATURE_TOL;
use freechaos::{
    catalan, centered_poisson_moment, convergence_scan, fourth_moment_decomposition, fourth_moment_statistic, free_poisson_cumulants,
    moments_from_cumulants, oracle_moment, semicircle_cumulants, wigner_moment, BigRational, CountTable,
    Family, Kernel, Law, Scalar,
};
use num_traits::ToPrimitive;

use crate::report::{Cell, Report, Table, ToCell};
use crate::CliError;

pub const ORACLE_TOL: f64 = 1e-9;
pub const DECOMPOSITION_TOL: f64 = 1e-10;
pub const QUADRATURE_GAP_TOL: f64 = 1e-6;
pub const SCAN_TOL: f64 = 1e-9;
/// Imaginary parts of mirror-symmetric moments must vanish to this level.
pub const REALITY_TOL: f64 = 1e-10;

fn relative_gap<T: Scalar>(a: &T, b: &T) -> f64 {
    (a.clone() - b.clone()).modulus() / b.modulus().max(1.0)
}

pub fn counts(max_m: usize) -> Result<Report, CliError> {
    let table = CountTable::new(max_m)?;
    let mut columns = vec!["m".to_string(), "catalan".into(), "riordan".into()];
    columns.extend((1..=max_m).map(|j| format!("refined_{j}")));
    columns.push("binomial_identity".into());
    columns.push("refinement".into());
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut out = Table::new("counts", &cols);
    let mut report = Report::new("counts");
    for m in 0..=max_m {
        let mut row = vec![
            Cell::from(m),
            Cell::Int(table.catalan[m].clone().into()),
            Cell::Int(table.riordan[m].clone().into()),
        ];
        for j in 1..=max_m {
            let v = table.refined[m].get(j).cloned().unwrap_or_default();
            row.push(Cell::Int(v.into()));
        }
        let binomial_ok = table.catalan_identity_holds(m);
        let refinement_ok = table.refinement_holds(m);
        row.push(Cell::Flag(binomial_ok));
        row.push(Cell::Flag(refinement_ok));
        out.push(row);
        report.check(format!("binomial_identity m={m}"), binomial_ok, format!("C_{m} = {}", table.catalan[m]));
        report.check(format!("refinement m={m}"), refinement_ok, format!("R_{m} = {}", table.riordan[m]));
    }
    report.tables.push(out);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Dist {
    Semicircle,
    Cpoisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Combinatorial,
    Quadrature,
    Both,
}

fn combinatorial_moments<T: Scalar + ToCell>(dist: Dist, param: T, max_m: usize) -> Result<Vec<(T, T)>, CliError> {
    let kappa = match dist {
        Dist::Semicircle => semicircle_cumulants(param.clone(), max_m)?,
        Dist::Cpoisson => free_poisson_cumulants(param.clone(), true, max_m)?,
    };
    let mu = moments_from_cumulants(&kappa, max_m)?;
    let mut out = Vec::with_capacity(max_m);
    for m in 1..=max_m {
        let closed = match dist {
            Dist::Semicircle if m % 2 == 1 => T::zero(),
            Dist::Semicircle => T::from_biguint(&catalan(m / 2)) * param.powu((m / 2) as u32),
            Dist::Cpoisson => centered_poisson_moment(param.clone(), m)?,
        };
        out.push((mu.get(m).clone(), closed));
    }
    Ok(out)
}

pub fn moments(
    dist: Dist,
    param: &BigRational,
    max_m: usize,
    method: Method,
    exact: bool,
    tol: Option<f64>,
) -> Result<Report, CliError> {
    let param_f = param.to_f64().unwrap_or(f64::NAN);
    let mut report = Report::new("moments");
    let combinatorial: Option<Vec<(Cell, f64)>> = if method == Method::Quadrature {
        None
    } else {
        let rows = if exact {
            combinatorial_moments(dist, param.clone(), max_m)?
                .into_iter()
                .map(|(v, c)| (v.cell(), v.as_f64(), v == c))
                .collect::<Vec<_>>()
        } else {
            combinatorial_moments(dist, param_f, max_m)?
                .into_iter()
                .map(|(v, c)| (v.cell(), v, relative_gap(&v, &c) <= 1e-12))
                .collect()
        };
        for (k, (_, _, ok)) in rows.iter().enumerate() {
            report.check(format!("closed_form m={}", k + 1), *ok, "transform vs closed form");
        }
        Some(rows.into_iter().map(|(c, v, _)| (c, v)).collect())
    };
    let quadrature: Option<Vec<f64>> = if method == Method::Combinatorial {
        None
    } else {
        let law = match dist {
            Dist::Semicircle => Law::semicircle(param_f)?,
            Dist::Cpoisson => Law::centered_free_poisson(param_f)?,
        };
        Some(
            (1..=max_m)
                .map(|m| law.quadrature_moment(m, QUADRATURE_TOL))
                .collect::<Result<_, _>>()?,
        )
    };

    let columns: &[&str] = match method {
        Method::Combinatorial => &["m", "combinatorial"],
        Method::Quadrature => &["m", "quadrature"],
        Method::Both => &["m", "combinatorial", "quadrature", "gap"],
    };
    let mut table = Table::new("moments", columns);
    let tol = tol.unwrap_or(QUADRATURE_GAP_TOL);
    for m in 1..=max_m {
        let mut row = vec![Cell::from(m)];
        if let Some(c) = &combinatorial {
            row.push(c[m - 1].0.clone());
        }
        if let Some(q) = &quadrature {
            row.push(Cell::Float(q[m - 1]));
        }
        if let (Some(c), Some(q)) = (&combinatorial, &quadrature) {
            let gap = (c[m - 1].1 - q[m - 1]).abs();
            row.push(Cell::Float(gap));
            report.check(format!("quadrature_gap m={m}"), gap <= tol, format!("gap {gap:.3e}, tol {tol:e}"));
        }
        table.push(row);
    }
    report.tables.push(table);
    Ok(report)
}

pub fn chaos<T: TextCoefficient + ToCell>(
    f: &Kernel<T>,
    m_max: usize,
    report_sequences: bool,
    with_oracle: bool,
    tol: Option<f64>,
) -> Result<Report, CliError> {
    let q = f.order();
    let mut report = Report::new("chaos");
    let mut columns = vec!["m", "moment", "d_part", "e_part"];
    if with_oracle {
        columns.extend(["oracle", "oracle_gap"]);
    }
    let mut moments = Table::new("moments", &columns);
    let mut sequences = Table::new("sequences", &["m", "sequence", "class", "value"]);
    for m in 2..=m_max {
        let r = wigner_moment(f, m)?;
        let im = r.total.to_complex().im;
        report.check(
            format!("real_moment m={m}"),
            im.abs() <= REALITY_TOL * r.total.modulus().max(1.0),
            format!("imaginary part {im:e}"),
        );
        let mut row = vec![Cell::from(m), r.total.cell(), r.d_sum.cell(), r.e_sum.cell()];
        if with_oracle {
            let oracle = oracle_moment(f, m, q * m)?;
            let gap = relative_gap(&oracle, &r.total);
            let tol = tol.unwrap_or(ORACLE_TOL);
            report.check(format!("oracle m={m}"), gap <= tol, format!("relative gap {gap:.3e}, tol {tol:e}"));
            row.push(oracle.cell());
            row.push(Cell::Float(gap));
        }
        moments.push(row);
        if report_sequences {
            for (seq, value) in &r.per_sequence {
                sequences.push(vec![
                    Cell::from(m),
                    Cell::from(seq.display()),
                    Cell::from(seq.class.label()),
                    value.cell(),
                ]);
            }
        }
    }
    report.tables.push(moments);
    if report_sequences {
        report.tables.push(sequences);
    }

    let dec = fourth_moment_decomposition(f)?;
    let statistic = fourth_moment_statistic(f)?;
    let target = T::from_i64(2) * dec.lambda.clone() * dec.lambda.clone() - dec.lambda.clone();
    let mut fourth = Table::new("fourth_moment", &["quantity", "value"]);
    fourth.push(vec!["norm_sq".into(), dec.lambda.cell()]);
    fourth.push(vec!["statistic".into(), statistic.cell()]);
    fourth.push(vec!["poisson_target".into(), target.cell()]);
    fourth.push(vec!["lhs".into(), dec.lhs.cell()]);
    fourth.push(vec!["rhs".into(), dec.rhs.cell()]);
    report.tables.push(fourth);
    let gap = relative_gap(&dec.lhs, &dec.rhs);
    let tol = tol.unwrap_or(DECOMPOSITION_TOL);
    report.check("decomposition", gap <= tol, format!("relative gap {gap:.3e}, tol {tol:e}"));

    let mut defect = Table::new("defect", &["component", "value"]);
    defect.push(vec!["midpoint".into(), dec.defect.midpoint.cell()]);
    for (r, v) in &dec.defect.offband {
        defect.push(vec![Cell::from(format!("offband_{r}")), v.cell()]);
    }
    defect.push(vec!["total".into(), dec.defect.total().cell()]);
    report.tables.push(defect);
    Ok(report)
}

pub fn oracle<T: TextCoefficient + ToCell>(
    f: &Kernel<T>,
    m_max: usize,
    level: Option<usize>,
    tol: Option<f64>,
) -> Result<Report, CliError> {
    let q = f.order();
    let tol = tol.unwrap_or(ORACLE_TOL);
    let mut report = Report::new("oracle");
    let mut table = Table::new("oracle", &["m", "oracle", "engine", "relative_gap"]);
    for m in 1..=m_max {
        let value = oracle_moment(f, m, level.unwrap_or(q * m))?;
        let engine = if m >= 2 { wigner_moment(f, m).ok() } else { None };
        let (engine_cell, gap_cell) = match engine {
            Some(r) => {
                let gap = relative_gap(&value, &r.total);
                report.check(format!("agreement m={m}"), gap <= tol, format!("relative gap {gap:.3e}, tol {tol:e}"));
                (r.total.cell(), Cell::Float(gap))
            }
            None => (Cell::Empty, Cell::Empty),
        };
        table.push(vec![Cell::from(m), value.cell(), engine_cell, gap_cell]);
    }
    report.tables.push(table);
    Ok(report)
}

pub fn scan(family: Family, m_max: usize, ns: &[usize], tol: Option<f64>) -> Result<Report, CliError> {
    let rows = convergence_scan(|n| family.kernel(n), family.rate(), m_max, ns)?;
    let offband: BTreeSet<usize> = rows.iter().flat_map(|r| r.defect.offband.keys().copied()).collect();
    let mut columns = vec!["n".to_string(), "norm_sq".into(), "statistic".into(), "statistic_gap".into(), "midpoint".into()];
    columns.extend(offband.iter().map(|r| format!("offband_{r}")));
    columns.push("defect_total".into());
    columns.extend((2..=m_max).map(|m| format!("gap_m{m}")));
    let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
    let mut table = Table::new("scan", &cols);
    let mut report = Report::new("scan");
    let tol = tol.unwrap_or(SCAN_TOL);
    for row in &rows {
        let mut cells = vec![
            Cell::from(row.n),
            Cell::Float(row.norm_sq),
            Cell::Float(row.statistic),
            Cell::Float(row.statistic_gap),
            Cell::Float(row.defect.midpoint),
        ];
        cells.extend(offband.iter().map(|r| Cell::Float(row.defect.offband.get(r).copied().unwrap_or(0.0))));
        cells.push(Cell::Float(row.defect.total()));
        cells.extend(row.moments.iter().map(|&(_, _, gap)| Cell::Float(gap)));
        table.push(cells);
        if let Family::Poisson { .. } = family {
            let worst = row.moments.iter().map(|t| t.2).fold(row.statistic_gap, f64::max);
            report.check(format!("poisson_fixed_point n={}", row.n), worst <= tol, format!("largest gap {worst:.3e}"));
        }
    }
    report.tables.push(table);
    Ok(report)
}
