//! Serialization helpers shared by the JSON and CSV reports.

use num_rational::BigRational;
use serde::Serializer;

pub fn serialize_display<T: std::fmt::Display, S: Serializer>(
    value: &T,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

pub fn serialize_display_vec<T: std::fmt::Display, S: Serializer>(
    values: &[T],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(ToString::to_string))
}

pub fn serialize_points<S: Serializer>(
    points: &[Vec<BigRational>],
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_seq(points.iter().map(|p| format_point(p)))
}

/// `(a, b/c, ...)`, the notation the CLI accepts back.
pub fn format_point(point: &[BigRational]) -> String {
    let parts: Vec<String> = point.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// JSON cannot carry infinities or NaN; those become `null`.
pub fn serialize_f64_lossless<S: Serializer>(
    value: &f64,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    if value.is_finite() {
        serializer.serialize_f64(*value)
    } else {
        serializer.serialize_none()
    }
}
