//! Experiment drivers, configuration parsing, and the CSV/PGM file
//! formats behind the command-line interface.

pub mod config;
pub mod image;
pub mod io;
pub mod phantom;
pub mod vanishing;

pub use image::{run_image_experiment, ImageExperimentConfig, ImageMode, MaskSpec};
pub use phantom::{synthesize_cartoon_texture, CartoonTexture, PhantomConfig};
pub use vanishing::{run_vanishing_noise, VanishingNoiseConfig, VanishingResult};

use crate::error::{Error, Result};

/// Peak signal-to-noise ratio in dB: 10·log10(peak² / MSE). Identical
/// inputs give +infinity (printed as the sentinel `inf`).
pub fn psnr(reference: &[f64], test: &[f64], peak: f64) -> f64 {
    assert_eq!(
        reference.len(),
        test.len(),
        "psnr needs images of identical shape"
    );
    let mse = reference
        .iter()
        .zip(test)
        .map(|(r, t)| (r - t) * (r - t))
        .sum::<f64>()
        / reference.len() as f64;
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (peak * peak / mse).log10()
    }
}

/// Checked variant used by the CLI paths.
pub fn psnr_checked(reference: &[f64], test: &[f64], peak: f64) -> Result<f64> {
    if reference.len() != test.len() {
        return Err(Error::Shape {
            context: "psnr",
            expected: reference.len(),
            got: test.len(),
        });
    }
    Ok(psnr(reference, test, peak))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_images_have_infinite_psnr() {
        let img = vec![1.0, 2.0, 3.0];
        let value = psnr(&img, &img, 255.0);
        assert!(value.is_infinite() && value > 0.0);
        assert_eq!(format!("{value}"), "inf");
    }

    #[test]
    fn full_scale_error_is_zero_db() {
        let reference = vec![0.0; 16];
        let test = vec![255.0; 16];
        assert!((psnr(&reference, &test, 255.0) - 0.0).abs() < 1e-12);
    }

    #[test]
    fn twenty_db_for_one_percent_mse() {
        // MSE = peak^2 / 100 -> 20 dB
        let peak = 255.0;
        let err = peak / 10.0;
        let reference = vec![0.0; 8];
        let test = vec![err; 8];
        assert!((psnr(&reference, &test, peak) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn shape_mismatch_rejected() {
        assert!(psnr_checked(&[1.0], &[1.0, 2.0], 255.0).is_err());
    }
}
