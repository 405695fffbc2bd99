//! Grid scans of the Heavy-ball stability regions.

use std::fs;
use std::path::{Path, PathBuf};

use heavyball::certificates::{hb_smu_beta_limit, region_hb_fl, region_hb_smu, region_polyak};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, spec_err, Result};
use crate::output::write_rows_to;
use crate::svg::{Area, AreaPlot};

pub const DEFAULT_RESOLUTION: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub alpha: f64,
    pub beta: f64,
    pub hb_fl: bool,
    pub hb_smu: bool,
    pub polyak_s21: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionScan {
    #[serde(rename = "L")]
    pub lipschitz: f64,
    pub mu: f64,
    pub resolution: usize,
    pub hb_fl_count: usize,
    pub hb_smu_count: usize,
    /// Cells inside the convex region but outside the strongly convex one.
    pub containment_violations: usize,
    #[serde(skip)]
    pub cells: Vec<RegionCell>,
}

/// `res × res` grid with `α = (2/L)·i/(res+1)`, `i = 1..=res`, and
/// `β = j/res`, `j = 0..res`.
pub fn scan(l: f64, mu: f64, res: usize) -> Result<RegionScan> {
    if !(mu > 0.0 && mu <= l && l.is_finite()) {
        return Err(spec_err(
            "mu",
            format!("need 0 < mu <= L, got mu={mu}, L={l}"),
        ));
    }
    if res == 0 {
        return Err(spec_err("res", "must be at least 1"));
    }
    let cells: Vec<RegionCell> = (1..=res)
        .into_par_iter()
        .flat_map_iter(|i| {
            let alpha = 2.0 / l * i as f64 / (res + 1) as f64;
            (0..res).map(move |j| {
                let beta = j as f64 / res as f64;
                RegionCell {
                    alpha,
                    beta,
                    hb_fl: region_hb_fl(l, alpha, beta).is_ok_and(|v| v.inside),
                    hb_smu: region_hb_smu(l, mu, alpha, beta).is_ok_and(|v| v.inside),
                    polyak_s21: region_polyak(l, alpha, beta).is_ok_and(|v| v.inside),
                }
            })
        })
        .collect();
    Ok(RegionScan {
        lipschitz: l,
        mu,
        resolution: res,
        hb_fl_count: cells.iter().filter(|c| c.hb_fl).count(),
        hb_smu_count: cells.iter().filter(|c| c.hb_smu).count(),
        containment_violations: cells.iter().filter(|c| c.hb_fl && !c.hb_smu).count(),
        cells,
    })
}

/// Both regions as shaded polygons over `α ∈ [0, 2/L]`, `β ∈ [0, 1]`.
pub fn region_plot(l: f64, mu: f64) -> AreaPlot {
    let a_max = 2.0 / l;
    let fl = vec![(0.0, 0.0), (0.0, 1.0), (a_max, 0.0)];
    let steps = 400;
    let mut smu = vec![(0.0, 0.0)];
    smu.extend((0..=steps).map(|i| {
        let a = a_max * i as f64 / steps as f64;
        (a, hb_smu_beta_limit(l, mu, a))
    }));
    smu.push((a_max, 0.0));
    AreaPlot {
        title: format!("Heavy-ball stability regions, L={l}, mu={mu}"),
        x_label: "alpha".into(),
        y_label: "beta".into(),
        x_range: (0.0, a_max),
        y_range: (0.0, 1.0),
        areas: vec![
            Area {
                name: "strongly convex (smooth)".into(),
                polygon: smu,
            },
            Area {
                name: "convex (smooth)".into(),
                polygon: fl,
            },
        ],
    }
}

/// Writes `region_L<L>_mu<mu>.csv` and `.svg` into `dir`.
pub fn write_region(l: f64, mu: f64, res: usize, dir: &Path) -> Result<(RegionScan, Vec<PathBuf>)> {
    let result = scan(l, mu, res)?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let stem = format!("region_L{l}_mu{mu}");
    let csv = dir.join(format!("{stem}.csv"));
    write_rows_to(&csv, &result.cells)?;
    let svg = dir.join(format!("{stem}.svg"));
    region_plot(l, mu).write(&svg)?;
    Ok((result, vec![csv, svg]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_have_nested_regions() {
        for (l, mu) in [(2.0, 1.0), (10.0, 1.0)] {
            let s = scan(l, mu, 50).unwrap();
            assert_eq!(s.cells.len(), 2500);
            assert_eq!(s.containment_violations, 0);
            assert!(s.hb_smu_count > s.hb_fl_count);
        }
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(scan(1.0, 2.0, 10).is_err());
        assert!(scan(1.0, 0.0, 10).is_err());
        assert!(scan(1.0, 1.0, 0).is_err());
    }

    #[test]
    fn plot_has_both_regions() {
        let svg = region_plot(2.0, 1.0).render();
        assert_eq!(svg.matches("<polygon").count(), 2);
    }
}
