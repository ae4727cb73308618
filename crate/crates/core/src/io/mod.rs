//! File formats: tick CSV, INI-style configuration, QQ SVG plots and run
//! manifests, plus the number formatting shared by every writer.

mod config;
mod manifest;
mod svg;
mod tick;

pub use config::{parse_ini, Ini, IniEntry, IniSection, RunConfig, StudySection, CONFIG_SECTIONS};
pub use manifest::RunManifest;
pub use svg::qq_svg;
pub use tick::TickSeries;

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_machine(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// Four decimals, as in printed tables.
pub fn fmt_human(x: f64) -> String {
    format!("{x:.4}")
}
