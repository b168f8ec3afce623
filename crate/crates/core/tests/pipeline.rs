use chrono::NaiveDate;
use fxrp_core::autoreg::{fit_ar, forecast_with_trend, simulate};
use fxrp_core::recurrence::{overlay, recurrence_plot, ThresholdMode};
use fxrp_core::render::{render_binary, render_distance, render_overlay};
use fxrp_core::series::{parse_csv, regularize};
use fxrp_core::texture::detect_transitions;
use fxrp_core::{
    ArModel64, EmbeddingConfig, GapPolicy, Image, RenderOptions, TimeSeries32, TimeSeries64,
    TransitionParams,
};

const WEEKDAYS: &str = "date,close\n\
2013-04-01,1.0\n2013-04-02,1.5\n2013-04-03,1.25\n2013-04-04,3.0\n2013-04-05,3.5\n\
2013-04-08,3.25\n2013-04-09,3.0\n";

#[test]
fn csv_to_png_round_trip() {
    let raw: TimeSeries64 = parse_csv(WEEKDAYS, "date", "close", "%Y-%m-%d").unwrap();
    let s = regularize(&raw, &GapPolicy::default()).unwrap();
    assert_eq!(s.len(), 9);
    assert_eq!(s.values()[5], 3.5);

    let plot = recurrence_plot(&s, EmbeddingConfig::default(), ThresholdMode::Global).unwrap();
    let opts = RenderOptions { cell_pixels: 2, ..RenderOptions::default() };
    let img = Image::decode_png(&render_binary(&plot.matrix, &opts).unwrap().encode_png().unwrap()).unwrap();
    assert_eq!((img.width(), img.height()), (18, 18));
    for i in 0..9u32 {
        for j in 0..9u32 {
            let want = if plot.matrix.get(i as usize, j as usize) { [0, 0, 0] } else { [255, 255, 255] };
            assert_eq!(img.pixel(2 * i + 1, 17 - 2 * j), want);
        }
    }

    let dist = render_distance(&plot.distances, &opts).unwrap();
    assert_eq!(dist.pixel(0, 17), [0, 0, 255]);

    let ov = overlay(&plot.matrix, &plot.matrix).unwrap();
    let both = render_overlay(&ov, &opts).unwrap();
    assert_eq!(both.pixel(0, 17), opts.color_both);
}

#[test]
fn f32_and_f64_pipelines_agree() {
    let values: Vec<f64> = (0..60).map(|i| ((i as f64) * 0.3).sin() * 2.0 + 0.25 * (i % 7) as f64).collect();
    let start = NaiveDate::from_ymd_opt(2011, 1, 1).unwrap();
    let s64 = TimeSeries64::from_values(start, values.clone(), "x").unwrap();
    let s32 = TimeSeries32::from_values(start, values.iter().map(|&v| v as f32).collect(), "x").unwrap();
    let config = EmbeddingConfig::new(2, 2).unwrap();
    let a = recurrence_plot(&s64, config, ThresholdMode::Global).unwrap();
    let b = recurrence_plot(&s32, config, ThresholdMode::Global).unwrap();
    let differing = (0..a.matrix.size())
        .flat_map(|i| (0..a.matrix.size()).map(move |j| (i, j)))
        .filter(|&(i, j)| a.matrix.get(i, j) != b.matrix.get(i, j))
        .count();
    assert!(differing <= 4, "{differing} cells differ between f32 and f64");
    assert_eq!(a.dates, b.dates);
    assert_eq!(a.dates[0], NaiveDate::from_ymd_opt(2011, 1, 3).unwrap());
}

#[test]
fn simulated_regime_change_is_dated() {
    let low = ArModel64::new(0.1, vec![0.9], 0.05).unwrap();
    let high = ArModel64::new(0.2, vec![0.9], 0.05).unwrap();
    let a = simulate(&low, 300, 3, &[1.0]).unwrap();
    let b = simulate(&high, 300, 4, &[2.0]).unwrap();
    let values: Vec<f64> = a.values().iter().chain(b.values()).copied().collect();
    let s = TimeSeries64::from_values(NaiveDate::from_ymd_opt(2012, 1, 2).unwrap(), values, "x").unwrap();
    let plot = recurrence_plot(&s, EmbeddingConfig::default(), ThresholdMode::Local { window: 60 }).unwrap();
    let report = detect_transitions(&plot.matrix, &plot.dates, TransitionParams::default()).unwrap();
    let top = report.top().unwrap();
    assert!(top.index.abs_diff(300) <= 30, "{top:?}");
    assert_eq!(top.date, s.dates()[top.index]);
}

#[test]
fn trend_plus_ar_forecast_continues_the_line() {
    let noise = simulate(&ArModel64::new(0.0, vec![0.5], 0.1).unwrap(), 400, 9, &[0.0]).unwrap();
    let values: Vec<f64> = noise.values().iter().enumerate().map(|(i, e)| 10.0 + 0.05 * i as f64 + e).collect();
    let s = TimeSeries64::from_values(NaiveDate::from_ymd_opt(2015, 1, 1).unwrap(), values, "x").unwrap();
    let fc = forecast_with_trend(&s, 1, 1, 50).unwrap();
    let last = fc.predictions[49];
    assert!((last - (10.0 + 0.05 * 449.0)).abs() < 0.5, "{last}");
    assert!(fit_ar(&s, 1).unwrap().rho[0] > 0.9);
}
