//! Trilinear functional, estimate sweeps, sharpness counterexamples and the
//! interval localisation map.

mod band;
mod boxes;
mod duhamel;
mod fit;
mod full;
mod lattice;
mod localize;
mod regimes;

pub use fit::{fit_exponent, ExponentFit};
pub use lattice::{block_weight, make_dyadic_random_field, trilinear_i, trilinear_i_direct};
pub use band::{
    band_product_norm, band_trilinear, interval_convolution, modulation_pieces, resonance_kernel,
    BandField, Footprint, KernelTable, SampledBand, Surface, Texture,
};
pub use regimes::{
    bilinear_bound, bilinear_fields, check_bilinear_strichartz, check_regime, regime_bound,
    regime_fields, stability_factor, validate_bilinear, validate_regime, BilinearCase, Regime,
    RegimeConstants, Sign, SweepOptions, SweepResult, TileSpec,
};
pub use full::{check_trilinear_full, multiband_field, trilinear_ratio, trilinear_sample, LatticeSpec};
pub use boxes::{
    counterexample, counterexample_c1, counterexample_c2, counterexample_sweep,
    interval_overlap_convolution, product_weighted_norm, trilinear_i_boxes, weighted_norm, BoxSpec,
    CharacteristicField, Counterexample, ExponentCase, Quadrature, WeightSpec, DEFAULT_QUADRATURE,
};
pub use duhamel::{duhamel_lower_bound_1, duhamel_lower_bound_2, phase_integral, LowerBound, Rect};
pub use localize::{interval_image, localize_map, LocalizeReport, MULTIPLICITY, WINDOW};
