//! Run configuration: built-in defaults, then a `key = value` file, then flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use irs_noma::netsim::{Algorithm, InterferenceModel, NetworkConfig};
use irs_noma::AllocationPolicy;

use crate::error::CliError;

/// Inclusive `start:stop:step` grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, CliError> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(CliError::Usage(format!(
                "range {start}:{stop}:{step} is not finite"
            )));
        }
        if step <= 0.0 || stop < start {
            return Err(CliError::Usage(format!(
                "range {start}:{stop}:{step} must increase with a positive step"
            )));
        }
        Ok(Self { start, stop, step })
    }

    pub fn points(&self) -> Vec<f64> {
        // Tolerate rounding in (stop - start) / step so the stop value is kept.
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let num = |p: &str| {
            p.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad range '{s}', expected start:stop:step")))
        };
        match parts.as_slice() {
            [a, b, c] => Range::new(num(a)?, num(b)?, num(c)?),
            [a] => {
                let v = num(a)?;
                Range::new(v, v, 1.0)
            }
            _ => Err(CliError::Usage(format!(
                "bad range '{s}', expected start:stop:step"
            ))),
        }
    }
}

/// Which minimum rates a sweep compares against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RminBasis {
    /// OMA rates at a fixed phase error (radians), the same for every row.
    Reference(f64),
    /// OMA rates at each row's own phase error, as pairing does.
    Tracking,
}

pub fn parse_interference(s: &str) -> Result<InterferenceModel, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "reflected" => Ok(InterferenceModel::Reflected),
        "direct-path" | "direct" => Ok(InterferenceModel::DirectPath),
        other => match other.strip_prefix("fixed:") {
            Some(w) => w
                .parse::<f64>()
                .map(InterferenceModel::Fixed)
                .map_err(|_| CliError::Usage(format!("bad fixed interference '{w}'"))),
            None => Err(CliError::Usage(format!(
                "unknown interference model '{s}' (reflected, direct-path, fixed:<watts>)"
            ))),
        },
    }
}

fn parse_basis(s: &str) -> Result<bool, CliError> {
    match s.trim() {
        "reference" => Ok(false),
        "tracking" => Ok(true),
        _ => Err(CliError::Usage(format!(
            "unknown minimum-rate basis '{s}' (reference, tracking)"
        ))),
    }
}

/// Every setting that a file or command line may supply.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub delta_deg: Option<f64>,
    pub drops: Option<usize>,
    pub area_km2: Option<f64>,
    pub bs_density: Option<f64>,
    pub user_density: Option<f64>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub carrier_ghz: Option<f64>,
    pub tx_power_dbm: Option<f64>,
    pub noise_dbm: Option<f64>,
    pub irs_offset_m: Option<f64>,
    pub interference: Option<InterferenceModel>,
    pub algorithm: Option<Algorithm>,
    pub out: Option<PathBuf>,
    pub sinr_file: Option<PathBuf>,
    pub gamma1_db: Option<f64>,
    pub gamma2_db: Option<f64>,
    pub delta_range_deg: Option<Range>,
    pub alpha_range: Option<Range>,
    pub policy: Option<AllocationPolicy>,
    pub rmin_tracking: Option<bool>,
    pub rmin_delta_deg: Option<f64>,
    pub cdf_points: Option<usize>,
}

fn value<T: FromStr>(key: &str, raw: &str) -> Result<T, String> {
    raw.parse::<T>()
        .map_err(|_| format!("invalid value '{raw}' for '{key}'"))
}

impl Overrides {
    /// Parses a config file body. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let mut o = Overrides::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message,
            };
            let (key, raw) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got '{line}'")))?;
            o.set(key.trim(), raw.trim()).map_err(err)?;
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    fn set(&mut self, key: &str, raw: &str) -> Result<(), String> {
        let msg = |e: CliError| e.to_string();
        match key.replace('-', "_").as_str() {
            "seed" => self.seed = Some(value(key, raw)?),
            "delta_deg" => self.delta_deg = Some(value(key, raw)?),
            "drops" => self.drops = Some(value(key, raw)?),
            "area_km2" => self.area_km2 = Some(value(key, raw)?),
            "bs_density" => self.bs_density = Some(value(key, raw)?),
            "user_density" => self.user_density = Some(value(key, raw)?),
            "m" => self.m = Some(value(key, raw)?),
            "n" => self.n = Some(value(key, raw)?),
            "carrier_ghz" => self.carrier_ghz = Some(value(key, raw)?),
            "tx_power_dbm" => self.tx_power_dbm = Some(value(key, raw)?),
            "noise_dbm" => self.noise_dbm = Some(value(key, raw)?),
            "irs_offset_m" => self.irs_offset_m = Some(value(key, raw)?),
            "interference" => self.interference = Some(parse_interference(raw).map_err(msg)?),
            "algorithm" => {
                self.algorithm = Some(raw.parse().map_err(|e: irs_noma::Error| e.to_string())?)
            }
            "out" => self.out = Some(PathBuf::from(raw)),
            "sinr_file" => self.sinr_file = Some(PathBuf::from(raw)),
            "gamma1_db" => self.gamma1_db = Some(value(key, raw)?),
            "gamma2_db" => self.gamma2_db = Some(value(key, raw)?),
            "delta_range_deg" => self.delta_range_deg = Some(raw.parse().map_err(msg)?),
            "alpha_range" => self.alpha_range = Some(raw.parse().map_err(msg)?),
            "policy" => {
                self.policy = Some(raw.parse().map_err(|e: irs_noma::Error| e.to_string())?)
            }
            "rmin_basis" => self.rmin_tracking = Some(parse_basis(raw).map_err(msg)?),
            "rmin_delta_deg" => self.rmin_delta_deg = Some(value(key, raw)?),
            "cdf_points" => self.cdf_points = Some(value(key, raw)?),
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Values set in `other` win.
    pub fn then(self, other: Overrides) -> Overrides {
        macro_rules! pick {
            ($($f:ident),*) => { Overrides { $($f: other.$f.or(self.$f)),* } };
        }
        pick!(
            seed,
            delta_deg,
            drops,
            area_km2,
            bs_density,
            user_density,
            m,
            n,
            carrier_ghz,
            tx_power_dbm,
            noise_dbm,
            irs_offset_m,
            interference,
            algorithm,
            out,
            sinr_file,
            gamma1_db,
            gamma2_db,
            delta_range_deg,
            alpha_range,
            policy,
            rmin_tracking,
            rmin_delta_deg,
            cdf_points
        )
    }
}

/// Everything a command needs.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub network: NetworkConfig,
    /// `None` runs every algorithm.
    pub algorithm: Option<Algorithm>,
    pub out: Option<PathBuf>,
    pub sinr_file: Option<PathBuf>,
    pub gamma1_db: f64,
    pub gamma2_db: f64,
    pub delta_range_deg: Range,
    pub alpha_range: Range,
    pub policy: AllocationPolicy,
    pub rmin_basis: RminBasis,
    /// Points per CDF curve in cdf.csv; 0 keeps every jump.
    pub cdf_points: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            network: NetworkConfig::default(),
            algorithm: None,
            out: None,
            sinr_file: None,
            gamma1_db: 8.0,
            gamma2_db: 5.0,
            delta_range_deg: Range {
                start: 0.0,
                stop: 50.0,
                step: 1.0,
            },
            alpha_range: Range {
                start: 0.01,
                stop: 0.99,
                step: 0.01,
            },
            policy: AllocationPolicy::Mpa,
            rmin_basis: RminBasis::Reference(0.0),
            cdf_points: 1000,
        }
    }
}

impl RunConfig {
    pub fn resolve(o: &Overrides) -> Result<Self, CliError> {
        let mut c = RunConfig::default();
        let net = &mut c.network;
        macro_rules! copy {
            ($($src:ident => $dst:expr),*) => { $(if let Some(v) = o.$src { $dst = v; })* };
        }
        copy!(
            seed => net.seed, drops => net.drops, area_km2 => net.area_km2,
            bs_density => net.bs_density, user_density => net.user_density, m => net.m_bs,
            n => net.n_irs, carrier_ghz => net.carrier_ghz, tx_power_dbm => net.tx_power_dbm,
            noise_dbm => net.noise_dbm, irs_offset_m => net.irs_offset_m,
            interference => net.interference
        );
        if let Some(d) = o.delta_deg {
            net.delta = d.to_radians();
        }
        copy!(
            gamma1_db => c.gamma1_db, gamma2_db => c.gamma2_db,
            delta_range_deg => c.delta_range_deg, alpha_range => c.alpha_range,
            policy => c.policy, cdf_points => c.cdf_points
        );
        c.algorithm = o.algorithm;
        c.out = o.out.clone();
        c.sinr_file = o.sinr_file.clone();
        c.rmin_basis = match o.rmin_tracking {
            Some(true) => RminBasis::Tracking,
            _ => RminBasis::Reference(o.rmin_delta_deg.unwrap_or(0.0).to_radians()),
        };
        c.network.validate()?;
        Ok(c)
    }

    pub fn algorithms(&self) -> Vec<Algorithm> {
        match self.algorithm {
            Some(a) => vec![a],
            None => Algorithm::ALL.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_points_keep_the_stop() {
        let r: Range = "0:50:1".parse().unwrap();
        let p = r.points();
        assert_eq!(p.len(), 51);
        assert_eq!(p[50], 50.0);
        let r: Range = "0.01:0.99:0.01".parse().unwrap();
        assert_eq!(r.points().len(), 99);
        assert!("5:1:1".parse::<Range>().is_err());
        assert!("0:1:0".parse::<Range>().is_err());
        assert!("0:1".parse::<Range>().is_err());
    }

    #[test]
    fn file_parsing() {
        let text = "# campaign\nseed = 9\n\ndelta_deg=5 # small\ninterference = fixed:0\n";
        let o = Overrides::parse(text, Path::new("c.cfg")).unwrap();
        assert_eq!(o.seed, Some(9));
        assert_eq!(o.delta_deg, Some(5.0));
        assert_eq!(o.interference, Some(InterferenceModel::Fixed(0.0)));
    }

    #[test]
    fn file_errors_carry_the_line() {
        let e = Overrides::parse("seed = 1\nbogus = 2\n", Path::new("c.cfg")).unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 2, .. }), "{e}");
        let e = Overrides::parse("seed 1\n", Path::new("c.cfg")).unwrap_err();
        assert!(matches!(e, CliError::Parse { line: 1, .. }));
        let e = Overrides::parse("drops = many\n", Path::new("c.cfg")).unwrap_err();
        assert!(e.to_string().contains("drops"));
    }

    #[test]
    fn flags_override_file_override_defaults() {
        let file = Overrides::parse("seed = 3\ndrops = 4\n", Path::new("c")).unwrap();
        let flags = Overrides {
            seed: Some(10),
            ..Overrides::default()
        };
        let c = RunConfig::resolve(&file.then(flags)).unwrap();
        assert_eq!(c.network.seed, 10);
        assert_eq!(c.network.drops, 4);
        assert_eq!(c.network.m_bs, 8);
    }

    #[test]
    fn invalid_network_is_rejected() {
        let o = Overrides {
            bs_density: Some(-1.0),
            ..Overrides::default()
        };
        assert!(RunConfig::resolve(&o).is_err());
    }
}
