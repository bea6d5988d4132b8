use std::fmt::Write as _;

use crate::error::{invalid, Result};

/// Tabulated rate function, serialised as `x,rate,speed_tag`.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    pub points: Vec<(f64, f64)>,
    pub speed_tag: String,
}

impl RateCurve {
    pub fn tabulate(xs: &[f64], speed_tag: impl Into<String>, f: impl Fn(f64) -> f64) -> Self {
        RateCurve { points: xs.iter().map(|&x| (x, f(x))).collect(), speed_tag: speed_tag.into() }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,rate,speed_tag\n");
        for (x, r) in &self.points {
            writeln!(s, "{x:.16e},{r:.16e},{}", self.speed_tag).unwrap();
        }
        s
    }

    pub fn from_csv(src: &str) -> Result<Self> {
        let mut lines = src.lines();
        if lines.next().map(str::trim) != Some("x,rate,speed_tag") {
            return Err(invalid("missing rate curve header"));
        }
        let mut points = Vec::new();
        let mut tag = String::new();
        for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(invalid(format!("row {}: expected 3 columns", i + 1)));
            }
            let num = |c: &str| c.trim().parse::<f64>().map_err(|e| invalid(format!("row {}: {e}", i + 1)));
            points.push((num(cols[0])?, num(cols[1])?));
            tag = cols[2].trim().to_string();
        }
        Ok(RateCurve { points, speed_tag: tag })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let c = RateCurve::tabulate(&[0.0, 0.1, 1.0 / 3.0, 2.0], "n^0.666667", |x| if x > 1.0 { f64::INFINITY } else { x.sqrt() });
        let back = RateCurve::from_csv(&c.to_csv()).unwrap();
        assert_eq!(back, c);
    }
}
