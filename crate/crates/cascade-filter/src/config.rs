//! Source and filter parameters plus the per-mode quantities derived from them.
//!
//! All rates and frequencies are in units of the atomic decay rate; the frame
//! rotates at the atomic transition frequency, so every frequency is a detuning.

use std::collections::HashMap;
use std::path::Path;

use num_complex::Complex;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::scalar::{cexp, im, lit, Cplx, Real};

/// Two-level atom driven on resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomParams<T> {
    pub gamma: T,
    pub omega_rabi: T,
}

impl<T: Real> AtomParams<T> {
    pub fn new(gamma: T, omega_rabi: T) -> Result<Self> {
        let p = Self { gamma, omega_rabi };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > T::zero()) || !self.gamma.is_finite() {
            return Err(Error::Parameter(format!("gamma must be finite and > 0, got {}", self.gamma)));
        }
        if !(self.omega_rabi >= T::zero()) || !self.omega_rabi.is_finite() {
            return Err(Error::Parameter(format!(
                "omega_rabi must be finite and >= 0, got {}",
                self.omega_rabi
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BankLabel {
    A,
    B,
}

/// Rule fixing the per-mode halfwidth from the mode spacing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KappaRule {
    /// kappa = 2.5 * delta_omega: neighbouring modes overlap. The default.
    Overlapping,
    /// kappa = delta_omega / 4: individual modes are resolved.
    Resolved,
    /// kappa = factor * delta_omega.
    Ratio(f64),
}

impl KappaRule {
    pub fn factor(self) -> f64 {
        match self {
            KappaRule::Overlapping => 2.5,
            KappaRule::Resolved => 0.25,
            KappaRule::Ratio(f) => f,
        }
    }
}

/// How the fluorescence is shared between filters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// All fluorescence enters a single array.
    OneFilter,
    /// A 50:50 splitter feeds two arrays.
    TwoFilter,
}

/// A multi-mode array filter of 2N+1 modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterBank<T> {
    pub n_side: usize,
    pub mode_spacing: T,
    pub mode_halfwidth: T,
    pub phase_index: u32,
    pub center_detuning: T,
    pub label: BankLabel,
}

impl<T: Real> FilterBank<T> {
    pub fn new(
        n_side: usize,
        mode_spacing: T,
        mode_halfwidth: T,
        phase_index: u32,
        center_detuning: T,
        label: BankLabel,
    ) -> Result<Self> {
        let b = Self { n_side, mode_spacing, mode_halfwidth, phase_index, center_detuning, label };
        b.validate()?;
        Ok(b)
    }

    /// Builds a bank from its effective halfwidth K: delta_omega = K/N and
    /// kappa from `rule` when N > 0, kappa = K for a single mode.
    pub fn from_halfwidth(
        n_side: usize,
        k_eff: T,
        phase_index: u32,
        center_detuning: T,
        rule: KappaRule,
        label: BankLabel,
    ) -> Result<Self> {
        if !(k_eff > T::zero()) {
            return Err(Error::Parameter(format!("effective halfwidth K must be > 0, got {k_eff}")));
        }
        let (dw, kappa) = if n_side == 0 {
            (T::zero(), k_eff)
        } else {
            let dw = k_eff / lit::<T>(n_side as f64);
            (dw, dw * lit::<T>(rule.factor()))
        };
        Self::new(n_side, dw, kappa, phase_index, center_detuning, label)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mode_halfwidth > T::zero()) || !self.mode_halfwidth.is_finite() {
            return Err(Error::Parameter(format!(
                "mode_halfwidth must be finite and > 0, got {}",
                self.mode_halfwidth
            )));
        }
        if !(self.mode_spacing >= T::zero()) || !self.mode_spacing.is_finite() {
            return Err(Error::Parameter(format!(
                "mode_spacing must be finite and >= 0, got {}",
                self.mode_spacing
            )));
        }
        if !self.center_detuning.is_finite() {
            return Err(Error::Parameter("center_detuning must be finite".into()));
        }
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        2 * self.n_side + 1
    }

    /// K = kappa for a single mode, N * delta_omega otherwise.
    pub fn effective_halfwidth(&self) -> T {
        if self.n_side == 0 {
            self.mode_halfwidth
        } else {
            lit::<T>(self.n_side as f64) * self.mode_spacing
        }
    }

    pub fn with_center(&self, center_detuning: T) -> Self {
        Self { center_detuning, ..*self }
    }

    pub fn with_label(&self, label: BankLabel) -> Self {
        Self { label, ..*self }
    }

    /// Signed mode indices -N..=N.
    pub fn indices(&self) -> impl Iterator<Item = i64> {
        let n = self.n_side as i64;
        -n..=n
    }
}

/// Atom feeding two arrays through a 50:50 splitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoFilterConfig<T> {
    pub atom: AtomParams<T>,
    pub bank_a: FilterBank<T>,
    pub bank_b: FilterBank<T>,
}

impl<T: Real> TwoFilterConfig<T> {
    pub fn new(atom: AtomParams<T>, bank_a: FilterBank<T>, bank_b: FilterBank<T>) -> Result<Self> {
        let c = Self { atom, bank_a, bank_b };
        c.validate()?;
        Ok(c)
    }

    /// Auto-correlation setup: B is a copy of A.
    pub fn auto(atom: AtomParams<T>, bank: FilterBank<T>) -> Result<Self> {
        Self::new(atom, bank.with_label(BankLabel::A), bank.with_label(BankLabel::B))
    }

    pub fn validate(&self) -> Result<()> {
        self.atom.validate()?;
        self.bank_a.validate()?;
        self.bank_b.validate()?;
        let (a, b) = (&self.bank_a, &self.bank_b);
        if a.n_side != b.n_side {
            return Err(Error::BankMismatch("n_side"));
        }
        if a.mode_spacing != b.mode_spacing {
            return Err(Error::BankMismatch("mode_spacing"));
        }
        if a.mode_halfwidth != b.mode_halfwidth {
            return Err(Error::BankMismatch("mode_halfwidth"));
        }
        if a.phase_index != b.phase_index {
            return Err(Error::BankMismatch("phase_index"));
        }
        Ok(())
    }

    /// The same configuration with the two banks' roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            atom: self.atom,
            bank_a: self.bank_b.with_label(BankLabel::A),
            bank_b: self.bank_a.with_label(BankLabel::B),
        }
    }
}

/// Detunings of the modes from the atomic resonance, ordered j = -N..=N.
pub fn mode_detunings<T: Real>(bank: &FilterBank<T>) -> Vec<T> {
    bank.indices()
        .map(|j| bank.center_detuning + lit::<T>(j as f64) * bank.mode_spacing)
        .collect()
}

/// Source-to-mode couplings E_j, ordered j = -N..=N.
pub fn mode_couplings<T: Real>(
    atom: &AtomParams<T>,
    bank: &FilterBank<T>,
    coupling: Coupling,
) -> Vec<Cplx<T>> {
    let n = bank.n_modes();
    let share = match coupling {
        Coupling::OneFilter => T::one(),
        Coupling::TwoFilter => lit::<T>(0.5),
    };
    let mag = (share * atom.gamma * bank.mode_halfwidth / lit::<T>(n as f64)).sqrt();
    bank.indices()
        .map(|j| Complex::new(mag, T::zero()) * mode_phase::<T>(bank.n_side, bank.phase_index, j))
        .collect()
}

/// e^{i m j pi / N}, defined as 1 for a single mode.
pub fn mode_phase<T: Real>(n_side: usize, m: u32, j: i64) -> Cplx<T> {
    if n_side == 0 {
        return Complex::new(T::one(), T::zero());
    }
    // reduce m*j modulo 2N before scaling so large products keep full precision
    let two_n = 2 * n_side as i64;
    let r = ((m as i64) * j).rem_euclid(two_n);
    let r = if r > n_side as i64 { r - two_n } else { r };
    cexp(im(T::pi() * lit::<T>(r as f64) / lit::<T>(n_side as f64)))
}

/// Reflectivities R_j = 1/(N + 1 - j) of the splitter chain, exact.
pub fn splitter_reflectivities(n_side: usize) -> Vec<Ratio<u64>> {
    let n = n_side as i64;
    (-n..=n).map(|j| Ratio::new(1, (n + 1 - j) as u64)).collect()
}

/// Parsed `[atom]` / `[filter_a]` / `[filter_b]` file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile<T> {
    pub atom: AtomParams<T>,
    pub filter_a: Option<FilterBank<T>>,
    pub filter_b: Option<FilterBank<T>>,
}

const ATOM_KEYS: [&str; 2] = ["gamma", "omega_rabi"];
const FILTER_KEYS: [&str; 5] = ["n_side", "mode_spacing", "mode_halfwidth", "phase_index", "center_detuning"];

impl<T: Real> ConfigFile<T> {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Parses `key = value` lines under section headers. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sections: HashMap<String, HashMap<String, String>> = HashMap::new();
        let mut current: Option<String> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = lineno + 1;
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| Error::Config(format!("line {at}: malformed section header")))?
                    .trim()
                    .to_string();
                if !matches!(name.as_str(), "atom" | "filter_a" | "filter_b") {
                    return Err(Error::Config(format!("line {at}: unknown section [{name}]")));
                }
                if sections.contains_key(&name) {
                    return Err(Error::Config(format!("line {at}: duplicate section [{name}]")));
                }
                sections.insert(name.clone(), HashMap::new());
                current = Some(name);
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {at}: expected key = value")))?;
            let (k, v) = (k.trim(), v.trim());
            let sec = current
                .as_ref()
                .ok_or_else(|| Error::Config(format!("line {at}: key `{k}` outside a section")))?;
            let allowed: &[&str] = if sec == "atom" { &ATOM_KEYS } else { &FILTER_KEYS };
            if !allowed.contains(&k) {
                return Err(Error::Config(format!("line {at}: unknown key `{k}` in [{sec}]")));
            }
            let entries = sections.get_mut(sec).expect("section registered");
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Config(format!("line {at}: duplicate key `{k}`")));
            }
        }

        let atom_sec = sections
            .get("atom")
            .ok_or_else(|| Error::Config("missing [atom] section".into()))?;
        let atom = AtomParams::new(real(atom_sec, "atom", "gamma")?, real(atom_sec, "atom", "omega_rabi")?)?;
        let bank = |name: &str, label| -> Result<Option<FilterBank<T>>> {
            let Some(s) = sections.get(name) else { return Ok(None) };
            Ok(Some(FilterBank::new(
                integer(s, name, "n_side")?,
                real(s, name, "mode_spacing")?,
                real(s, name, "mode_halfwidth")?,
                integer(s, name, "phase_index")?,
                real(s, name, "center_detuning")?,
                label,
            )?))
        };
        Ok(Self { atom, filter_a: bank("filter_a", BankLabel::A)?, filter_b: bank("filter_b", BankLabel::B)? })
    }
}

fn lookup<'a>(s: &'a HashMap<String, String>, sec: &str, key: &str) -> Result<&'a str> {
    s.get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Config(format!("missing key `{key}` in [{sec}]")))
}

fn real<T: Real>(s: &HashMap<String, String>, sec: &str, key: &str) -> Result<T> {
    let v = lookup(s, sec, key)?;
    let x: f64 = v
        .parse()
        .map_err(|_| Error::Config(format!("[{sec}] {key}: `{v}` is not a number")))?;
    Ok(lit(x))
}

fn integer<I: std::str::FromStr>(s: &HashMap<String, String>, sec: &str, key: &str) -> Result<I> {
    let v = lookup(s, sec, key)?;
    v.parse()
        .map_err(|_| Error::Config(format!("[{sec}] {key}: `{v}` is not a non-negative integer")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bank(n: usize, dw: f64, kappa: f64, m: u32, c: f64) -> FilterBank<f64> {
        FilterBank::new(n, dw, kappa, m, c, BankLabel::A).unwrap()
    }

    #[test]
    fn detunings_examples() {
        assert_eq!(mode_detunings(&bank(0, 0.0, 1.0, 1, 0.0)), vec![0.0]);
        assert_eq!(mode_detunings(&bank(2, 0.5, 1.0, 1, 1.0)), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        let c = 5.0 * std::f64::consts::PI;
        let d = mode_detunings(&bank(80, 8.0 / 80.0, 0.25, 1, c));
        assert_eq!(d.len(), 161);
        assert!((d[0] - (c - 8.0)).abs() < 1e-12);
        assert!((d[160] - (c + 8.0)).abs() < 1e-12);
    }

    #[test]
    fn couplings_examples() {
        let atom = AtomParams::new(1.0, 2.0).unwrap();
        let e = mode_couplings(&atom, &bank(0, 0.0, 0.7, 1, 0.0), Coupling::OneFilter);
        assert!((e[0].re - 0.7f64.sqrt()).abs() < 1e-15 && e[0].im == 0.0);

        let e = mode_couplings(&atom, &bank(1, 1.0, 2.5, 1, 0.0), Coupling::OneFilter);
        let phases: Vec<f64> = e.iter().map(|z| z.arg()).collect();
        assert!((phases[0].abs() - std::f64::consts::PI).abs() < 1e-12);
        assert!(phases[1].abs() < 1e-15);
        assert!((phases[2].abs() - std::f64::consts::PI).abs() < 1e-12);

        let e = mode_couplings(&atom, &bank(80, 0.01, 0.025, 1, 0.0), Coupling::TwoFilter);
        let want = (0.0125f64 / 161.0).sqrt();
        assert!(e.iter().all(|z| (z.norm() - want).abs() < 1e-15));
        assert!((want - 8.81e-3).abs() < 5e-6);
    }

    #[test]
    fn reflectivities() {
        assert_eq!(splitter_reflectivities(0), vec![Ratio::from_integer(1)]);
        assert_eq!(splitter_reflectivities(1), vec![Ratio::new(1, 3), Ratio::new(1, 2), Ratio::from_integer(1)]);
        for n in 0..20 {
            assert_eq!(*splitter_reflectivities(n).last().unwrap(), Ratio::from_integer(1));
        }
    }

    #[test]
    fn halfwidth_rules() {
        let b = FilterBank::<f64>::from_halfwidth(80, 8.0, 1, 0.0, KappaRule::Overlapping, BankLabel::A).unwrap();
        assert!((b.mode_spacing - 0.1).abs() < 1e-15);
        assert!((b.mode_halfwidth - 0.25).abs() < 1e-15);
        assert!((b.effective_halfwidth() - 8.0).abs() < 1e-12);
        let t = FilterBank::<f64>::from_halfwidth(80, 8.0, 1, 0.0, KappaRule::Resolved, BankLabel::A).unwrap();
        assert!((t.mode_halfwidth - 0.025).abs() < 1e-15);
        let s = FilterBank::<f64>::from_halfwidth(0, 2.0, 1, 0.0, KappaRule::Overlapping, BankLabel::A).unwrap();
        assert_eq!(s.mode_halfwidth, 2.0);
        assert_eq!(s.effective_halfwidth(), 2.0);
    }

    #[test]
    fn validation() {
        assert!(AtomParams::new(0.0, 1.0).is_err());
        assert!(AtomParams::new(1.0, -1.0).is_err());
        assert!(AtomParams::new(1.0, f64::NAN).is_err());
        assert!(FilterBank::new(1, 1.0, 0.0, 1, 0.0, BankLabel::A).is_err());
        let atom = AtomParams::new(1.0, 1.0).unwrap();
        let a = bank(1, 1.0, 2.5, 1, 0.0);
        let b = bank(2, 1.0, 2.5, 1, 0.0).with_label(BankLabel::B);
        assert_eq!(TwoFilterConfig::new(atom, a, b), Err(Error::BankMismatch("n_side")));
        let b = bank(1, 1.0, 2.5, 1, 3.0).with_label(BankLabel::B);
        assert!(TwoFilterConfig::new(atom, a, b).is_ok());
    }

    #[test]
    fn parse_config() {
        let text = "# mollow\n[atom]\ngamma = 1\nomega_rabi = 15.707963267948966\n\n[filter_a]\nn_side = 2\nmode_spacing = 0.5\nmode_halfwidth = 1.25\nphase_index = 1\ncenter_detuning = 0 # central\n";
        let c = ConfigFile::<f64>::parse(text).unwrap();
        assert_eq!(c.atom.gamma, 1.0);
        let a = c.filter_a.unwrap();
        assert_eq!(a.n_side, 2);
        assert_eq!(a.mode_halfwidth, 1.25);
        assert!(c.filter_b.is_none());

        let bad = "[atom]\ngamma = 1\nomega_rabi = 1\nwidth = 2\n";
        assert!(matches!(ConfigFile::<f64>::parse(bad), Err(Error::Config(m)) if m.contains("unknown key")));
        assert!(ConfigFile::<f64>::parse("[atom]\ngamma = 1\n").is_err());
        assert!(ConfigFile::<f64>::parse("[laser]\n").is_err());
        assert!(ConfigFile::<f64>::parse("gamma = 1\n").is_err());
        assert!(ConfigFile::<f64>::parse("[atom]\ngamma = x\nomega_rabi = 1\n").is_err());
        let neg = "[atom]\ngamma=1\nomega_rabi=1\n[filter_a]\nn_side=-1\nmode_spacing=1\nmode_halfwidth=1\nphase_index=1\ncenter_detuning=0\n";
        assert!(ConfigFile::<f64>::parse(neg).is_err());
    }
}
