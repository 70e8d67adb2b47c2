use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::behavior::{transferability_score, DisparityMeasure};
use crate::controller::ControlParams;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::seed::EvalSeed;
use crate::testbed::{covered_distance, evaluate_reality, simulate, TestbedConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    SimFitness,
    RealFitness,
    DisparityFitness,
    DisparityTrajectory,
    Score,
}

impl GridKind {
    pub const ALL: [GridKind; 5] = [
        GridKind::SimFitness,
        GridKind::RealFitness,
        GridKind::DisparityFitness,
        GridKind::DisparityTrajectory,
        GridKind::Score,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GridKind::SimFitness => "sim_fitness",
            GridKind::RealFitness => "real_fitness",
            GridKind::DisparityFitness => "disparity_fitness",
            GridKind::DisparityTrajectory => "disparity_trajectory",
            GridKind::Score => "score",
        }
    }
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GridKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GridKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown map kind `{s}`")))
    }
}

/// Grid size, written `NXxNY` (e.g. `75x75`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resolution {
    pub nx: usize,
    pub ny: usize,
}

impl Resolution {
    pub fn new(nx: usize, ny: usize) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::Config(format!(
                "grid resolution must be at least 2x2, got {nx}x{ny}"
            )));
        }
        Ok(Self { nx, ny })
    }

    pub fn cells(&self) -> usize {
        self.nx * self.ny
    }
}

impl Default for Resolution {
    fn default() -> Self {
        Self { nx: 75, ny: 75 }
    }
}

impl fmt::Display for Resolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.nx, self.ny)
    }
}

impl FromStr for Resolution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("resolution must look like 75x75, got `{s}`"));
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let nx = a.trim().parse().map_err(|_| bad())?;
        let ny = b.trim().parse().map_err(|_| bad())?;
        Resolution::new(nx, ny)
    }
}

/// Values on a regular lattice over `[0,1]^2`; node `(i, j)` sits at
/// `(i / (nx-1), j / (ny-1))`. Stored row-major in `i` then `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub resolution: Resolution,
    pub kind: GridKind,
    pub values: Vec<f64>,
}

impl Grid {
    pub fn new(resolution: Resolution, kind: GridKind, values: Vec<f64>) -> Result<Self> {
        if values.len() != resolution.cells() {
            return Err(Error::Config(format!(
                "grid {} needs {} values, got {}",
                resolution,
                resolution.cells(),
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Config(format!("grid value {v} is not finite")));
        }
        Ok(Self {
            resolution,
            kind,
            values,
        })
    }

    pub fn nx(&self) -> usize {
        self.resolution.nx
    }

    pub fn ny(&self) -> usize {
        self.resolution.ny
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny() + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.index(i, j)]
    }

    pub fn coords(&self, i: usize, j: usize) -> [f64; 2] {
        node_coords(self.resolution, i, j)
    }

    /// Node closest to a point of the unit square.
    pub fn nearest_node(&self, p: [f64; 2]) -> (usize, usize) {
        let snap =
            |x: f64, n: usize| ((x.clamp(0.0, 1.0) * (n - 1) as f64).round() as usize).min(n - 1);
        (snap(p[0], self.nx()), snap(p[1], self.ny()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Per-node flag `value >= threshold`.
    pub fn mask_at_least(&self, threshold: f64) -> Vec<bool> {
        self.values.iter().map(|&v| v >= threshold).collect()
    }
}

fn node_coords(res: Resolution, i: usize, j: usize) -> [f64; 2] {
    [
        i as f64 / (res.nx - 1) as f64,
        j as f64 / (res.ny - 1) as f64,
    ]
}

#[derive(Debug, Clone, Copy)]
pub struct MapOptions {
    pub exec: Exec,
    /// Measure behind the `score` kind.
    pub measure: DisparityMeasure,
    pub reference: f64,
}

impl Default for MapOptions {
    fn default() -> Self {
        Self {
            exec: Exec::default(),
            measure: DisparityMeasure::Trajectory,
            reference: DisparityMeasure::Trajectory.default_reference(),
        }
    }
}

/// Evaluates `kind` at every node. Real-evaluator cells draw noise from
/// `(master_seed, cell index)`, so the map does not depend on scheduling.
pub fn map_grid(
    kind: GridKind,
    cfg: &TestbedConfig,
    resolution: Resolution,
    master_seed: u64,
) -> Result<Grid> {
    map_grid_with(kind, cfg, resolution, master_seed, &MapOptions::default())
}

pub fn map_grid_with(
    kind: GridKind,
    cfg: &TestbedConfig,
    resolution: Resolution,
    master_seed: u64,
    opts: &MapOptions,
) -> Result<Grid> {
    cfg.validate()?;
    let resolution = Resolution::new(resolution.nx, resolution.ny)?;
    let values = opts.exec.try_map(resolution.cells(), |cell| {
        let [p1, p2] = node_coords(resolution, cell / resolution.ny, cell % resolution.ny);
        let p = ControlParams::new(p1, p2)?;
        let real = || evaluate_reality(p, cfg, EvalSeed::new(master_seed, cell as u64));
        match kind {
            GridKind::SimFitness => covered_distance(&simulate(p, cfg)),
            GridKind::RealFitness => covered_distance(&real()),
            GridKind::DisparityFitness => {
                DisparityMeasure::Fitness.disparity(&simulate(p, cfg), &real())
            }
            GridKind::DisparityTrajectory => {
                DisparityMeasure::Trajectory.disparity(&simulate(p, cfg), &real())
            }
            GridKind::Score => {
                let d = opts.measure.disparity(&simulate(p, cfg), &real())?;
                transferability_score(d, opts.reference)
            }
        }
    })?;
    Grid::new(resolution, kind, values)
}

/// Nodes strictly greater than every existing 8-neighbor.
pub fn count_local_maxima(grid: &Grid) -> usize {
    let (nx, ny) = (grid.nx() as isize, grid.ny() as isize);
    let mut count = 0;
    for i in 0..nx {
        for j in 0..ny {
            let v = grid.get(i as usize, j as usize);
            let is_max = (-1..=1)
                .flat_map(|di| (-1..=1).map(move |dj| (di, dj)))
                .filter(|&(di, dj)| (di, dj) != (0, 0))
                .map(|(di, dj)| (i + di, j + dj))
                .filter(|&(a, b)| a >= 0 && b >= 0 && a < nx && b < ny)
                .all(|(a, b)| v > grid.get(a as usize, b as usize));
            if is_max {
                count += 1;
            }
        }
    }
    count
}

/// Writes `p1,p2,value` rows in node order with 17 significant digits.
pub fn write_grid_csv(grid: &Grid, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(grid.values.len() * 72);
    out.push_str("p1,p2,value\n");
    for i in 0..grid.nx() {
        for j in 0..grid.ny() {
            let [p1, p2] = grid.coords(i, j);
            out.push_str(&format!("{p1:.16e},{p2:.16e},{:.16e}\n", grid.get(i, j)));
        }
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(out.as_bytes())
        .map_err(|e| Error::io(path, e))
}

pub fn read_grid_csv(path: &Path, kind: GridKind) -> Result<Grid> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("p1,p2,value") {
        return Err(Error::parse(path, "missing `p1,p2,value` header"));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::parse(path, format!("line {}: {e}", n + 2)))?;
        if fields.len() != 3 {
            return Err(Error::parse(
                path,
                format!("line {}: expected 3 fields", n + 2),
            ));
        }
        rows.push([fields[0], fields[1], fields[2]]);
    }
    let first_p1 = rows.first().ok_or_else(|| Error::parse(path, "no rows"))?[0];
    let ny = rows.iter().take_while(|r| r[0] == first_p1).count();
    if ny == 0 || rows.len() % ny != 0 {
        return Err(Error::parse(path, "rows do not form a regular grid"));
    }
    let resolution = Resolution::new(rows.len() / ny, ny)?;
    Grid::new(resolution, kind, rows.iter().map(|r| r[2]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_peak(res: Resolution, centers: &[[f64; 2]]) -> Grid {
        let mut values = Vec::new();
        for i in 0..res.nx {
            for j in 0..res.ny {
                let p = node_coords(res, i, j);
                values.push(
                    centers
                        .iter()
                        .map(|c| (-((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)) / 0.02).exp())
                        .sum(),
                );
            }
        }
        Grid::new(res, GridKind::SimFitness, values).unwrap()
    }

    #[test]
    fn resolution_parsing() {
        assert_eq!(
            "75x75".parse::<Resolution>().unwrap(),
            Resolution { nx: 75, ny: 75 }
        );
        assert_eq!(
            "3X4".parse::<Resolution>().unwrap(),
            Resolution { nx: 3, ny: 4 }
        );
        assert!("1x5".parse::<Resolution>().is_err());
        assert!("75".parse::<Resolution>().is_err());
    }

    #[test]
    fn maxima_counts() {
        let res = Resolution::new(41, 41).unwrap();
        let flat = Grid::new(res, GridKind::SimFitness, vec![3.0; res.cells()]).unwrap();
        assert_eq!(count_local_maxima(&flat), 0);
        assert_eq!(count_local_maxima(&single_peak(res, &[[0.4, 0.6]])), 1);
        assert_eq!(
            count_local_maxima(&single_peak(res, &[[0.2, 0.2], [0.8, 0.7]])),
            2
        );
    }

    #[test]
    fn plateau_is_not_a_maximum() {
        let res = Resolution::new(3, 3).unwrap();
        let mut values = vec![0.0; 9];
        values[4] = 1.0;
        values[5] = 1.0;
        assert_eq!(
            count_local_maxima(&Grid::new(res, GridKind::Score, values).unwrap()),
            0
        );
    }

    #[test]
    fn flat_testbed_gives_zero_grid() {
        let mut cfg = TestbedConfig::default().noise_free();
        cfg.sim_peaks.iter_mut().for_each(|p| p.amplitude = 0.0);
        cfg.real_peak.amplitude = 0.0;
        let res = Resolution::new(5, 5).unwrap();
        for kind in [GridKind::SimFitness, GridKind::RealFitness] {
            let g = map_grid(kind, &cfg, res, 0).unwrap();
            assert!(g.values.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn nearest_node_rounds() {
        let g = Grid::new(
            Resolution::new(75, 75).unwrap(),
            GridKind::Score,
            vec![0.0; 5625],
        )
        .unwrap();
        assert_eq!(g.nearest_node([0.70, 0.60]), (52, 44));
        assert_eq!(g.nearest_node([0.0, 1.0]), (0, 74));
    }

    #[test]
    fn rejects_bad_values() {
        let res = Resolution::new(2, 2).unwrap();
        assert!(Grid::new(res, GridKind::Score, vec![0.0; 3]).is_err());
        assert!(Grid::new(res, GridKind::Score, vec![0.0, 1.0, f64::NAN, 2.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.csv");
        let g = Grid::new(
            Resolution::new(2, 3).unwrap(),
            GridKind::Score,
            (0..6).map(f64::from).collect(),
        )
        .unwrap();
        write_grid_csv(&g, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "p1,p2,value");
        assert_eq!(lines.len(), 7);
        // Row-major in i then j: second row is (0, 0.5).
        let second: Vec<f64> = lines[2].split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(second, vec![0.0, 0.5, 1.0]);
        assert_eq!(read_grid_csv(&path, GridKind::Score).unwrap(), g);
    }
}
