//! Bounded-ratio sweeps of the bilinear Strichartz and trilinear regime estimates.

use super::band::{band_product_norm, band_trilinear, BandField, Footprint, SampledBand, Surface};
use crate::dyadic::DyadicScale;
use crate::error::{invalid, Result, ZlabError};
use crate::projectors::{cyclic_distance, AngularSector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn wave_surface(self) -> Surface {
        match self {
            Sign::Plus => Surface::WavePlus,
            Sign::Minus => Surface::WaveMinus,
        }
    }
}

impl FromStr for Sign {
    type Err = ZlabError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            other => Err(invalid("sign", format!("expected + or -, got `{other}`"))),
        }
    }
}

/// Frequency, modulation and angular parameters of one interaction tile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TileSpec {
    pub n: DyadicScale,
    pub n1: DyadicScale,
    pub n2: DyadicScale,
    pub l: DyadicScale,
    pub l1: DyadicScale,
    pub l2: DyadicScale,
    #[serde(default)]
    pub a: Option<DyadicScale>,
    #[serde(default)]
    pub j1: Option<u64>,
    #[serde(default)]
    pub j2: Option<u64>,
    pub sign: Sign,
    #[serde(default)]
    pub cube_side: Option<f64>,
}

impl TileSpec {
    /// All scales 1, sign +, no angular or cube data.
    pub fn unit() -> Self {
        TileSpec {
            n: DyadicScale::ONE,
            n1: DyadicScale::ONE,
            n2: DyadicScale::ONE,
            l: DyadicScale::ONE,
            l1: DyadicScale::ONE,
            l2: DyadicScale::ONE,
            a: None,
            j1: None,
            j2: None,
            sign: Sign::Plus,
            cube_side: None,
        }
    }

    /// Name/value pairs for tabular output.
    pub fn describe(&self) -> Vec<(String, f64)> {
        let mut v = vec![
            ("N".to_string(), self.n.value_f64()),
            ("N1".to_string(), self.n1.value_f64()),
            ("N2".to_string(), self.n2.value_f64()),
            ("L".to_string(), self.l.value_f64()),
            ("L1".to_string(), self.l1.value_f64()),
            ("L2".to_string(), self.l2.value_f64()),
            (
                "sign".to_string(),
                if self.sign == Sign::Plus { 1.0 } else { -1.0 },
            ),
        ];
        if let Some(a) = self.a {
            v.push(("A".to_string(), a.value_f64()));
        }
        if let Some(j) = self.j1 {
            v.push(("j1".to_string(), j as f64));
        }
        if let Some(j) = self.j2 {
            v.push(("j2".to_string(), j as f64));
        }
        if let Some(d) = self.cube_side {
            v.push(("d".to_string(), d));
        }
        v
    }

    fn sectors(&self) -> Result<Option<(AngularSector, AngularSector)>> {
        match (self.a, self.j1, self.j2) {
            (Some(a), Some(j1), Some(j2)) => Ok(Some((
                AngularSector::new(a, j1)?,
                AngularSector::new(a, j2)?,
            ))),
            (None, None, None) => Ok(None),
            _ => Err(invalid("A/j1/j2", "give all three angular parameters or none")),
        }
    }
}

/// Numerical meaning of the asymptotic relations in the hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeConstants {
    /// `a << b` means `much * a <= b`.
    pub much: f64,
    /// `a ~ b` means `a <= comparable * b` and `b <= comparable * a`.
    pub comparable: f64,
    /// `a <~ b` means `a <= lesssim * b`.
    pub lesssim: f64,
    pub min_freq: u64,
    pub min_angle: u64,
    pub sep_lo: u64,
    pub sep_hi: u64,
    pub parallel_sep: u64,
}

impl Default for RegimeConstants {
    fn default() -> Self {
        RegimeConstants {
            much: 4.0,
            comparable: 2.0,
            lesssim: 1.0,
            min_freq: 64,
            min_angle: 64,
            sep_lo: 16,
            sep_hi: 32,
            parallel_sep: 16,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    TransLowMod,
    TransHighMod,
    ParallelHH,
    HighLow,
    SmallWave,
}

impl Regime {
    pub const ALL: [Regime; 5] = [
        Regime::TransLowMod,
        Regime::TransHighMod,
        Regime::ParallelHH,
        Regime::HighLow,
        Regime::SmallWave,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Regime::TransLowMod => "trans-low-mod",
            Regime::TransHighMod => "trans-high-mod",
            Regime::ParallelHH => "parallel-hh",
            Regime::HighLow => "high-low",
            Regime::SmallWave => "small-wave",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Regime {
    type Err = ZlabError;
    fn from_str(s: &str) -> Result<Self> {
        Regime::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| invalid("regime", format!("unknown regime `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BilinearCase {
    SchSch,
    WaveSchCube,
    WaveSchAnnulus,
}

impl BilinearCase {
    pub const ALL: [BilinearCase; 3] = [
        BilinearCase::SchSch,
        BilinearCase::WaveSchCube,
        BilinearCase::WaveSchAnnulus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BilinearCase::SchSch => "sch-sch",
            BilinearCase::WaveSchCube => "wave-sch-cube",
            BilinearCase::WaveSchAnnulus => "wave-sch-annulus",
        }
    }
}

impl fmt::Display for BilinearCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BilinearCase {
    type Err = ZlabError;
    fn from_str(s: &str) -> Result<Self> {
        BilinearCase::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| invalid("case", format!("unknown bilinear case `{s}`")))
    }
}

/// Lattice spacing of the frequency quadrature and correlation length of the
/// random amplitude texture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub dxi: f64,
    pub texture_scale: f64,
}

impl SweepOptions {
    pub fn new(dxi: f64) -> Self {
        SweepOptions {
            dxi,
            texture_scale: 1.0,
        }
    }

    pub fn refined(self) -> Self {
        SweepOptions {
            dxi: self.dxi / 2.0,
            ..self
        }
    }
}

/// Outcome of a sweep: one `(scale, ratio)` pair per seed or per scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub label: String,
    pub parameters: Vec<(String, f64)>,
    pub measured: Vec<(f64, f64)>,
    pub fitted_slope: Option<f64>,
    pub fit_residual: Option<f64>,
    pub max_ratio: f64,
}

impl SweepResult {
    pub fn from_ratios(label: String, parameters: Vec<(String, f64)>, measured: Vec<(f64, f64)>) -> Self {
        let max_ratio = measured.iter().map(|m| m.1).fold(0.0, f64::max);
        SweepResult {
            label,
            parameters,
            measured,
            fitted_slope: None,
            fit_residual: None,
            max_ratio,
        }
    }
}

/// `max(a, b) / min(a, b)`, infinite when exactly one side vanishes.
pub fn stability_factor(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if hi == 0.0 {
        1.0
    } else if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

fn le(c: &RegimeConstants, a: f64, b: f64) -> bool {
    a <= c.lesssim * b
}

fn ll(c: &RegimeConstants, a: f64, b: f64) -> bool {
    c.much * a <= b
}

fn sim(c: &RegimeConstants, a: f64, b: f64) -> bool {
    a <= c.comparable * b && b <= c.comparable * a
}

fn require(ok: bool, regime: &str, what: String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(ZlabError::Hypothesis(format!("{regime}: requires {what}")))
    }
}

fn check_transverse(spec: &TileSpec, c: &RegimeConstants, name: &str) -> Result<()> {
    let (n, n1, n2) = (spec.n.value_f64(), spec.n1.value_f64(), spec.n2.value_f64());
    require(
        spec.n.value() >= c.min_freq,
        name,
        format!("{} <= N (N = {n})", c.min_freq),
    )?;
    require(le(c, n, n1), name, format!("N <~ N1 (N = {n}, N1 = {n1})"))?;
    require(sim(c, n1, n2), name, format!("N1 ~ N2 (N1 = {n1}, N2 = {n2})"))?;
    let (a, j1, j2) = match (spec.a, spec.j1, spec.j2) {
        (Some(a), Some(j1), Some(j2)) => (a, j1, j2),
        _ => {
            return Err(ZlabError::Hypothesis(format!(
                "{name}: requires angular parameters A, j1, j2"
            )))
        }
    };
    require(
        a.value() >= c.min_angle,
        name,
        format!("{} <= A (A = {a})", c.min_angle),
    )?;
    let dist = cyclic_distance(j1, j2, a.value());
    require(
        c.sep_lo <= dist && dist <= c.sep_hi,
        name,
        format!("{} <= |j1 - j2| <= {} (|j1 - j2| = {dist})", c.sep_lo, c.sep_hi),
    )
}

/// Checks the hypotheses of a trilinear regime, naming the first violated one.
pub fn validate_regime(spec: &TileSpec, regime: Regime, c: &RegimeConstants) -> Result<()> {
    spec.sectors()?;
    let name = regime.name();
    let (n, n1, n2) = (spec.n.value_f64(), spec.n1.value_f64(), spec.n2.value_f64());
    match regime {
        Regime::TransLowMod => {
            check_transverse(spec, c, name)?;
            let a = spec.a.unwrap().value_f64();
            require(ll(c, a, n1), name, format!("A << N1 (A = {a}, N1 = {n1})"))?;
            for (lbl, l) in [("L", spec.l), ("L1", spec.l1), ("L2", spec.l2)] {
                let lv = l.value_f64();
                require(le(c, lv, n1 * n1), name, format!("{lbl} <~ N1^2 ({lbl} = {lv}, N1 = {n1})"))?;
            }
            Ok(())
        }
        Regime::TransHighMod => {
            check_transverse(spec, c, name)?;
            let a = spec.a.unwrap().value_f64();
            require(a <= n1, name, format!("A <= N1 (A = {a}, N1 = {n1})"))
        }
        Regime::ParallelHH => {
            require(ll(c, 1.0, n), name, format!("1 << N (N = {n})"))?;
            require(le(c, n, n1), name, format!("N <~ N1 (N = {n}, N1 = {n1})"))?;
            require(sim(c, n1, n2), name, format!("N1 ~ N2 (N1 = {n1}, N2 = {n2})"))?;
            let (a, j1, j2) = match (spec.a, spec.j1, spec.j2) {
                (Some(a), Some(j1), Some(j2)) => (a, j1, j2),
                _ => {
                    return Err(ZlabError::Hypothesis(format!(
                        "{name}: requires angular parameters A, j1, j2"
                    )))
                }
            };
            let av = a.value_f64();
            require(sim(c, av, n1), name, format!("A ~ N1 (A = {av}, N1 = {n1})"))?;
            let dist = cyclic_distance(j1, j2, a.value());
            require(
                dist <= c.parallel_sep,
                name,
                format!("|j1 - j2| <= {} (|j1 - j2| = {dist})", c.parallel_sep),
            )
        }
        Regime::HighLow => require(
            ll(c, n1, n2) || ll(c, n2, n1),
            name,
            format!("N1 << N2 or N2 << N1 (N1 = {n1}, N2 = {n2})"),
        ),
        Regime::SmallWave => require(le(c, n, 1.0), name, format!("N <~ 1 (N = {n})")),
    }
}

/// Right-hand side of the regime estimate for unit-norm inputs.
pub fn regime_bound(spec: &TileSpec, regime: Regime) -> f64 {
    let (n, n1, n2) = (spec.n.value_f64(), spec.n1.value_f64(), spec.n2.value_f64());
    let (l, l1, l2) = (spec.l.value_f64(), spec.l1.value_f64(), spec.l2.value_f64());
    let lprod = l * l1 * l2;
    let a = spec.a.map(|a| a.value_f64()).unwrap_or(1.0);
    match regime {
        Regime::TransLowMod => n1.powf(-0.5) * (a / n1).sqrt() * lprod.sqrt(),
        Regime::TransHighMod => {
            let lmax = l.max(l1).max(l2);
            lprod.sqrt() * n.powf(-0.5) / lmax.sqrt() * (n1 / a).sqrt()
        }
        Regime::ParallelHH => lprod.powf(5.0 / 12.0) * n.powf(-0.5) * (n / n1).powf(0.25),
        Regime::HighLow => {
            lprod.powf(5.0 / 12.0) * n.powf(-0.5) * (n1 / n2).min(n2 / n1).powf(1.0 / 6.0)
        }
        Regime::SmallWave => lprod.powf(1.0 / 3.0),
    }
}

/// Checks the hypotheses of a bilinear case.
pub fn validate_bilinear(spec: &TileSpec, case: BilinearCase) -> Result<()> {
    match case {
        BilinearCase::WaveSchCube => match spec.cube_side {
            Some(d) if d >= 1.0 && d.is_finite() => Ok(()),
            Some(d) => Err(ZlabError::Hypothesis(format!(
                "{case}: requires cube side d >= 1 (d = {d})"
            ))),
            None => Err(ZlabError::Hypothesis(format!("{case}: requires a cube side d"))),
        },
        _ => Ok(()),
    }
}

/// Right-hand side of the bilinear estimate for unit-norm inputs.
pub fn bilinear_bound(spec: &TileSpec, case: BilinearCase) -> f64 {
    let n1 = spec.n1.value_f64();
    match case {
        BilinearCase::SchSch => {
            (n1 / spec.n2.value_f64()).sqrt() * (spec.l1.value_f64() * spec.l2.value_f64()).sqrt()
        }
        BilinearCase::WaveSchCube => {
            let d = spec.cube_side.unwrap_or(1.0);
            (d.min(n1) / n1).sqrt() * (spec.l.value_f64() * spec.l1.value_f64()).sqrt()
        }
        BilinearCase::WaveSchAnnulus => {
            let n = spec.n.value_f64();
            (n.min(n1) / n1).sqrt() * (spec.l.value_f64() * spec.l1.value_f64()).sqrt()
        }
    }
}

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The two unit-norm fields of a bilinear case for one seed.
pub fn bilinear_fields(
    spec: &TileSpec,
    case: BilinearCase,
    seed: u64,
    opts: SweepOptions,
) -> Result<(SampledBand, SampledBand)> {
    validate_bilinear(spec, case)?;
    let mut rng = seeded(seed);
    let ts = opts.texture_scale;
    let (fa, fs, fl) = match case {
        BilinearCase::SchSch => (Footprint::Annulus(spec.n1), Surface::Schrodinger, spec.l1),
        BilinearCase::WaveSchCube => (
            Footprint::Cube {
                center: (0.0, 0.0),
                side: spec.cube_side.unwrap(),
            },
            spec.sign.wave_surface(),
            spec.l,
        ),
        BilinearCase::WaveSchAnnulus => (Footprint::Annulus(spec.n), spec.sign.wave_surface(), spec.l),
    };
    let (ga, gl) = match case {
        BilinearCase::SchSch => (Footprint::Annulus(spec.n2), spec.l2),
        _ => (Footprint::Annulus(spec.n1), spec.l1),
    };
    let f = BandField::random(&mut rng, fa, fs, fl, ts).sample(opts.dxi)?;
    let g = BandField::random(&mut rng, ga, Surface::Schrodinger, gl, ts).sample(opts.dxi)?;
    Ok((f, g))
}

/// Ratio `||u v||_{L2} / RHS` per seed for one bilinear case.
pub fn check_bilinear_strichartz(
    spec: &TileSpec,
    case: BilinearCase,
    seeds: &[u64],
    opts: SweepOptions,
) -> Result<SweepResult> {
    validate_bilinear(spec, case)?;
    let rhs = bilinear_bound(spec, case);
    let mut measured = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let (f, g) = bilinear_fields(spec, case, seed, opts)?;
        measured.push((seed as f64, band_product_norm(&f, &g)? / rhs));
    }
    let mut params = spec.describe();
    params.push(("dxi".into(), opts.dxi));
    Ok(SweepResult::from_ratios(case.name().to_string(), params, measured))
}

/// The three unit-norm fields `(f, g1, g2)` of a regime for one seed.
pub fn regime_fields(
    spec: &TileSpec,
    seed: u64,
    opts: SweepOptions,
) -> Result<(SampledBand, SampledBand, SampledBand)> {
    let sectors = spec.sectors()?;
    let mut rng = seeded(seed);
    let ts = opts.texture_scale;
    let (fp1, fp2) = match sectors {
        Some((s1, s2)) => (Footprint::Sector(spec.n1, s1), Footprint::Sector(spec.n2, s2)),
        None => (Footprint::Annulus(spec.n1), Footprint::Annulus(spec.n2)),
    };
    let f = BandField::random(&mut rng, Footprint::Annulus(spec.n), spec.sign.wave_surface(), spec.l, ts)
        .sample(opts.dxi)?;
    let g1 = BandField::random(&mut rng, fp1, Surface::Schrodinger, spec.l1, ts).sample(opts.dxi)?;
    let g2 = BandField::random(&mut rng, fp2, Surface::Schrodinger, spec.l2, ts).sample(opts.dxi)?;
    Ok((f, g1, g2))
}

/// Ratio `|I(f, g1, g2)| / RHS` per seed for one trilinear regime.
pub fn check_regime(
    spec: &TileSpec,
    regime: Regime,
    seeds: &[u64],
    constants: &RegimeConstants,
    opts: SweepOptions,
) -> Result<SweepResult> {
    validate_regime(spec, regime, constants)?;
    let rhs = regime_bound(spec, regime);
    let mut measured = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let (f, g1, g2) = regime_fields(spec, seed, opts)?;
        measured.push((seed as f64, band_trilinear(&f, &g1, &g2)?.abs() / rhs));
    }
    let mut params = spec.describe();
    params.push(("dxi".into(), opts.dxi));
    Ok(SweepResult::from_ratios(regime.name().to_string(), params, measured))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::dy;

    fn tlm() -> TileSpec {
        TileSpec {
            n: dy(64),
            n1: dy(256),
            n2: dy(256),
            a: Some(dy(64)),
            j1: Some(0),
            j2: Some(16),
            ..TileSpec::unit()
        }
    }

    #[test]
    fn trans_low_mod_hypotheses() {
        let c = RegimeConstants::default();
        validate_regime(&tlm(), Regime::TransLowMod, &c).unwrap();
        let mut s = tlm();
        s.n = dy(32);
        let e = validate_regime(&s, Regime::TransLowMod, &c).unwrap_err();
        assert!(e.to_string().contains("64 <= N"), "{e}");
        let mut s = tlm();
        s.j2 = Some(8);
        let e = validate_regime(&s, Regime::TransLowMod, &c).unwrap_err();
        assert!(e.to_string().contains("|j1 - j2|"), "{e}");
        let mut s = tlm();
        s.n1 = dy(128);
        s.n2 = dy(128);
        let e = validate_regime(&s, Regime::TransLowMod, &c).unwrap_err();
        assert!(e.to_string().contains("A << N1"), "{e}");
        // Cyclic distance: 0 and 48 are 16 apart modulo 64.
        let mut s = tlm();
        s.j2 = Some(48);
        validate_regime(&s, Regime::TransLowMod, &c).unwrap();
    }

    #[test]
    fn other_hypotheses() {
        let c = RegimeConstants::default();
        let mut s = TileSpec::unit();
        s.n1 = dy(2);
        s.n2 = dy(4);
        assert!(validate_regime(&s, Regime::HighLow, &c).is_err());
        s.n2 = dy(8);
        validate_regime(&s, Regime::HighLow, &c).unwrap();
        validate_regime(&TileSpec::unit(), Regime::SmallWave, &c).unwrap();
        s.n = dy(4);
        assert!(validate_regime(&s, Regime::SmallWave, &c).is_err());
        let mut p = TileSpec {
            n: dy(16),
            n1: dy(64),
            n2: dy(64),
            a: Some(dy(32)),
            j1: Some(0),
            j2: Some(4),
            ..TileSpec::unit()
        };
        validate_regime(&p, Regime::ParallelHH, &c).unwrap();
        p.a = Some(dy(16));
        assert!(validate_regime(&p, Regime::ParallelHH, &c).is_err());
        assert!(validate_bilinear(&TileSpec::unit(), BilinearCase::WaveSchCube).is_err());
    }

    #[test]
    fn bounds_at_unit_scales() {
        let s = TileSpec::unit();
        for r in [Regime::ParallelHH, Regime::HighLow, Regime::SmallWave] {
            assert_eq!(regime_bound(&s, r), 1.0);
        }
        let t = tlm();
        let expect = (1.0f64 / 256.0).sqrt() * (64.0f64 / 256.0).sqrt();
        assert!((regime_bound(&t, Regime::TransLowMod) - expect).abs() < 1e-15);
    }

    #[test]
    fn names_round_trip() {
        for r in Regime::ALL {
            assert_eq!(r.name().parse::<Regime>().unwrap(), r);
        }
        for c in BilinearCase::ALL {
            assert_eq!(c.name().parse::<BilinearCase>().unwrap(), c);
        }
    }
}
