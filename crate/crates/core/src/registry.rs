//! Preparation models and robustness schemes behind common traits, looked
//! up by the names used in configuration files.

use std::collections::BTreeMap;

use crate::config::ExperimentConfig;
use crate::fourmode::{squeeze_parameter, undepleted_population, undepleted_variance, FourModeModel};
use crate::interferometer::SplitState;
use crate::multimode::{MultimodeModel, MultimodeScan};
use crate::oat::{fwm_robustness, oat_robustness, optimize_oat, OatNoise, RobustnessPoint};
use crate::wigner::{run_ensemble, Estimate, ModePopulations, ScanPoint};
use crate::{Error, Result};

/// A separated ensemble ready for the interferometer.
#[derive(Debug, Clone, PartialEq)]
pub struct Prepared {
    pub t_fwm: f64,
    pub states: Vec<SplitState>,
    /// Overlap of the two packets at the partition point; zero for mode
    /// models.
    pub boundary_fraction: f64,
}

/// A way of preparing the four-mode correlated state.
pub trait FwmModel: Send + Sync {
    fn name(&self) -> &'static str;

    /// `N_t chi` of the model, 1/s.
    fn nt_chi(&self) -> f64;

    /// Populations and pair variances at each mixing time.
    fn scan(&self, t_grid: &[f64], n_traj: usize, seed: u64) -> Result<Vec<ScanPoint>>;

    fn prepare(&self, t_fwm: f64, n_traj: usize, seed: u64) -> Result<Prepared>;
}

/// A scheme whose sensitivity is tested against atom-number changes.
pub trait RobustnessScheme: Send + Sync {
    fn name(&self) -> &'static str;

    fn scan(&self, epsilons: &[f64]) -> Result<Vec<RobustnessPoint>>;
}

pub type Builder<T> = fn(&ExperimentConfig) -> Result<Box<T>>;

/// Name-keyed constructors.
pub struct Registry<T: ?Sized> {
    builders: BTreeMap<String, Builder<T>>,
}

impl<T: ?Sized> Default for Registry<T> {
    fn default() -> Self {
        Registry { builders: BTreeMap::new() }
    }
}

impl<T: ?Sized> Registry<T> {
    pub fn register(&mut self, name: &str, builder: Builder<T>) {
        self.builders.insert(name.to_string(), builder);
    }

    pub fn names(&self) -> Vec<&str> {
        self.builders.keys().map(String::as_str).collect()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.builders.contains_key(name)
    }

    pub fn build(&self, name: &str, config: &ExperimentConfig) -> Result<Box<T>> {
        let b = self.builders.get(name).ok_or_else(|| {
            Error::config(format!("unknown name `{name}`; registered: {}", self.names().join(", ")))
        })?;
        b(config)
    }
}

/// `fourmode`, `multimode1d`, `undepleted` and `coherent`.
pub fn models() -> Registry<dyn FwmModel> {
    let mut r: Registry<dyn FwmModel> = Registry::default();
    r.register("fourmode", |c| Ok(Box::new(FourMode(c.four_mode_model()?))));
    r.register("multimode1d", |c| Ok(Box::new(Multimode(MultimodeModel::new(c.multimode_config())?))));
    r.register("undepleted", |c| Ok(Box::new(Undepleted(c.four_mode_model()?))));
    r.register("coherent", |c| Ok(Box::new(Coherent(c.four_mode_model()?))));
    r
}

/// `oat` and `fwm`.
pub fn schemes() -> Registry<dyn RobustnessScheme> {
    let mut r: Registry<dyn RobustnessScheme> = Registry::default();
    r.register("oat", |c| Ok(Box::new(OatScheme::from_config(c))));
    r.register("fwm", |c| {
        Ok(Box::new(FwmScheme { model: c.four_mode_model()?, t_fwm: c.fwm.t_fwm.value(), n_traj: c.n_traj, seed: c.rng_seed }))
    });
    r
}

struct FourMode(FourModeModel);

impl FwmModel for FourMode {
    fn name(&self) -> &'static str {
        "fourmode"
    }

    fn nt_chi(&self) -> f64 {
        self.0.dimensionless_time(1.0)
    }

    fn scan(&self, t_grid: &[f64], n_traj: usize, seed: u64) -> Result<Vec<ScanPoint>> {
        self.0.scan(t_grid, n_traj, seed)
    }

    fn prepare(&self, t_fwm: f64, n_traj: usize, seed: u64) -> Result<Prepared> {
        let e = self.0.prepare(t_fwm, n_traj, seed)?;
        Ok(Prepared { t_fwm, states: e.trajectories.iter().map(|s| s.split()).collect(), boundary_fraction: 0.0 })
    }
}

struct Multimode(MultimodeModel);

impl Multimode {
    fn run(&self, t_grid: &[f64], n_traj: usize, seed: u64) -> Result<MultimodeScan> {
        self.0.scan(t_grid, n_traj, seed, false)
    }
}

impl FwmModel for Multimode {
    fn name(&self) -> &'static str {
        "multimode1d"
    }

    fn nt_chi(&self) -> f64 {
        self.0.nt_chi()
    }

    fn scan(&self, t_grid: &[f64], n_traj: usize, seed: u64) -> Result<Vec<ScanPoint>> {
        Ok(self.run(t_grid, n_traj, seed)?.points)
    }

    fn prepare(&self, t_fwm: f64, n_traj: usize, seed: u64) -> Result<Prepared> {
        let mut s = self.run(&[t_fwm], n_traj, seed)?;
        log::info!("{:.2e} of the atoms lie near the partition point", s.boundary_fraction[0]);
        Ok(Prepared { t_fwm, states: s.states.remove(0), boundary_fraction: self.0.packet_overlap(t_fwm)? })
    }
}

/// Closed-form undepleted-pump curves; it has no ensemble.
struct Undepleted(FourModeModel);

impl FwmModel for Undepleted {
    fn name(&self) -> &'static str {
        "undepleted"
    }

    fn nt_chi(&self) -> f64 {
        self.0.dimensionless_time(1.0)
    }

    /// Pumps stay at their initial numbers. Only `v_aR_bL` has a closed
    /// form; the other pairs are NaN.
    fn scan(&self, t_grid: &[f64], _n_traj: usize, _seed: u64) -> Result<Vec<ScanPoint>> {
        crate::fourmode::validate_grid(t_grid)?;
        let s = self.0.seeds;
        if s.n_ar != s.n_bl {
            return Err(Error::config("the undepleted solution needs equal seeds in aR and bL"));
        }
        let nan = Estimate { value: f64::NAN, std_err: 0.0 };
        Ok(t_grid
            .iter()
            .map(|&t| {
                let r = squeeze_parameter(self.0.params.chi, s.n_al, s.n_br, t);
                let seed = undepleted_population(s.n_ar, r);
                let mut pair_variances = [nan; 6];
                pair_variances[0] = Estimate { value: undepleted_variance(s.n_ar, r), std_err: 0.0 };
                ScanPoint {
                    t_fwm: t,
                    populations: ModePopulations { n_al: s.n_al, n_bl: seed, n_ar: seed, n_br: s.n_br },
                    pair_variances,
                }
            })
            .collect())
    }

    fn prepare(&self, _t_fwm: f64, _n_traj: usize, _seed: u64) -> Result<Prepared> {
        Err(Error::config("the undepleted model is analytic and has no ensemble; use fourmode or multimode1d"))
    }
}

/// The seeded coherent state without any mixing: the uncorrelated control.
struct Coherent(FourModeModel);

impl Coherent {
    fn states(&self, n_traj: usize, seed: u64) -> Result<Vec<SplitState>> {
        self.0.seeds.validate()?;
        Ok(run_ensemble(n_traj, seed, |rng| self.0.seeds.sample(rng), |s| Ok(s.split()))?.trajectories)
    }
}

impl FwmModel for Coherent {
    fn name(&self) -> &'static str {
        "coherent"
    }

    fn nt_chi(&self) -> f64 {
        0.0
    }

    fn scan(&self, t_grid: &[f64], n_traj: usize, seed: u64) -> Result<Vec<ScanPoint>> {
        crate::fourmode::validate_grid(t_grid)?;
        let pops: Vec<[f64; 4]> = self.states(n_traj, seed)?.iter().map(|s| s.populations()).collect();
        t_grid.iter().map(|&t| ScanPoint::from_trajectories(t, &pops, [1.0; 4])).collect()
    }

    fn prepare(&self, t_fwm: f64, n_traj: usize, seed: u64) -> Result<Prepared> {
        Ok(Prepared { t_fwm, states: self.states(n_traj, seed)?, boundary_fraction: 0.0 })
    }
}

/// One-axis twisting optimised at a large and a small atom number.
pub struct OatScheme {
    pub chi: f64,
    pub kappa: f64,
    pub atom_numbers: Vec<f64>,
    pub n_traj: usize,
    pub target: f64,
    pub seed: u64,
}

impl OatScheme {
    pub fn from_config(c: &ExperimentConfig) -> Self {
        OatScheme {
            chi: c.oat.chi.value(),
            kappa: c.oat.kappa,
            atom_numbers: vec![c.oat.n_large, c.oat.n_small],
            n_traj: c.oat.n_traj,
            target: c.oat.target,
            seed: c.rng_seed,
        }
    }
}

impl RobustnessScheme for OatScheme {
    fn name(&self) -> &'static str {
        "oat"
    }

    /// Rows are labelled `oat_N<atoms>`.
    fn scan(&self, epsilons: &[f64]) -> Result<Vec<RobustnessPoint>> {
        let noise = OatNoise::new(self.n_traj, self.seed)?;
        let mut out = Vec::new();
        for &n in &self.atom_numbers {
            let opt = optimize_oat(&noise, n, self.chi, self.kappa, self.target)?;
            for mut p in oat_robustness(&noise, &opt, epsilons)? {
                p.scheme = format!("oat_N{}", n.round() as u64);
                out.push(p);
            }
        }
        Ok(out)
    }
}

/// Four-mode mixing with every phase frozen at the nominal optimum.
pub struct FwmScheme {
    pub model: FourModeModel,
    pub t_fwm: f64,
    pub n_traj: usize,
    pub seed: u64,
}

impl RobustnessScheme for FwmScheme {
    fn name(&self) -> &'static str {
        "fwm"
    }

    fn scan(&self, epsilons: &[f64]) -> Result<Vec<RobustnessPoint>> {
        fwm_robustness(&self.model, self.t_fwm, self.n_traj, self.seed, epsilons)
    }
}
