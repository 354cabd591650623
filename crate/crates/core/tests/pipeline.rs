//! End-to-end behaviour of the blur and edge-detection pipeline.

use sccorr::pipeline::{blur_select, gaussian_blur_sc, reference_pipeline, BLUR_WEIGHTS};
use sccorr::*;

fn level(pixel: u8, n: usize) -> u64 {
    (f64::from(pixel) * n as f64 / 255.0).round() as u64
}

#[test]
fn variant_ordering_on_test_card() {
    let img = GrayImage::test_card(64, 64).unwrap();
    let mae = |v| run_pipeline(&img, &PipelineConfig::new(v)).unwrap().1.mae;
    let (none, regen, sync) = (mae(Variant::None), mae(Variant::Regen), mae(Variant::Sync));
    assert!(none >= 2.5 * sync, "none {none} sync {sync}");
    assert!(none >= 2.5 * regen, "none {none} regen {regen}");
    assert!((sync - regen).abs() <= 0.005, "sync {sync} regen {regen}");
}

#[test]
fn blur_tracks_exact_convolution_over_a_pixel_sweep() {
    let cfg = PipelineConfig::new(Variant::Sync);
    let n = cfg.n;
    let select = blur_select(&cfg).unwrap();
    let neighbours = [40u8, 90, 200, 15, 0, 120, 255, 60, 180];
    let mut total = 0.0;
    for centre in 0..=255u8 {
        let mut pixels = neighbours;
        pixels[4] = centre;
        // window position k sits at row k / 3, column k % 3 around (1, 1)
        let window: Vec<Bitstream> = (0..9)
            .map(|k| {
                let base = cfg.pixel_bases[2 * ((k / 3) % 2) + (k % 3) % 2];
                encode(level(pixels[k], n), &RngConfig::halton(base), n).unwrap()
            })
            .collect();
        let out = gaussian_blur_sc(&window, &select).unwrap();
        let exact: f64 = pixels
            .iter()
            .zip(BLUR_WEIGHTS)
            .map(|(&p, w)| f64::from(w) * level(p, n) as f64)
            .sum::<f64>()
            / (16.0 * n as f64);
        total += (out.value(Encoding::Unipolar) - exact).abs();
    }
    let mean = total / 256.0;
    assert!(mean <= 0.02, "{mean}");
}

#[test]
fn constant_image_has_no_edges() {
    let img = GrayImage::filled(23, 17, 173).unwrap();
    assert!(reference_pipeline(&img)
        .values
        .iter()
        .all(|&v| v.abs() < 1e-12));
    for v in [Variant::Regen, Variant::Sync] {
        let (_, report) = run_pipeline(&img, &PipelineConfig::new(v)).unwrap();
        // blurred counts still wobble by a few units out of n
        assert!(report.mae <= 0.03, "{v}: {}", report.mae);
    }
}

#[test]
fn report_fields_follow_config() {
    let img = GrayImage::test_card(20, 12).unwrap();
    let mut cfg = PipelineConfig::with_length(Variant::Regen, 128);
    cfg.tile = 4;
    let (out, report) = run_pipeline(&img, &cfg).unwrap();
    assert_eq!((out.width(), out.height()), (20, 12));
    assert_eq!(
        (report.variant, report.n, report.tile),
        (Variant::Regen, 128, 4)
    );
    assert!(report.mae.is_finite() && report.psnr > 0.0 && report.seconds >= 0.0);
}

#[test]
fn bad_configs_are_rejected() {
    let img = GrayImage::test_card(8, 8).unwrap();
    let mut cfg = PipelineConfig::new(Variant::Sync);
    cfg.depth = 0;
    assert!(run_pipeline(&img, &cfg).is_err());
    let mut cfg = PipelineConfig::new(Variant::Sync);
    cfg.pixel_bases[2] = 1;
    assert!(run_pipeline(&img, &cfg).is_err());
}

#[test]
fn pgm_files_round_trip() {
    let img = GrayImage::test_card(31, 9).unwrap();
    let path = std::env::temp_dir().join(format!("sccorr-{}-roundtrip.pgm", std::process::id()));
    img.write_pgm(&path).unwrap();
    let back = GrayImage::read_pgm(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(back, img);
}

#[test]
fn ascii_pgm_with_comments() {
    let text = b"P2\n# a comment\n3 2\n# another\n15\n0 15 7\n3 8 15\n";
    let img = GrayImage::decode_pgm(text).unwrap();
    assert_eq!((img.width(), img.height()), (3, 2));
    assert_eq!(img.pixels(), &[0, 255, 119, 51, 136, 255]);
}

#[test]
fn missing_pgm_reports_path() {
    let err = GrayImage::read_pgm("/nonexistent/sccorr.pgm").unwrap_err();
    assert!(err.to_string().contains("/nonexistent/sccorr.pgm"));
}
