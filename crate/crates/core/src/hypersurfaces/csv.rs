use super::Profile;
use crate::error::{GeomError, Result};
use std::f64::consts::PI;
use std::io::{BufRead, Write};

/// Writes `# theta,u` followed by one row per grid node, 17 significant digits.
pub fn write_profile_csv<W: Write>(profile: &Profile, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# theta,u")?;
    for (i, u) in profile.samples().iter().enumerate() {
        writeln!(out, "{:.16e},{:.16e}", profile.theta(i), u)?;
    }
    Ok(())
}

/// Reads a profile written by [`write_profile_csv`]; the angles must form the uniform grid.
pub fn read_profile_csv<R: BufRead>(input: R) -> Result<Profile> {
    let mut rows = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line.map_err(|e| GeomError::InvalidInput(format!("reading profile: {e}")))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let mut next = || -> Result<f64> {
            let text = fields
                .next()
                .ok_or_else(|| GeomError::InvalidInput(format!("line {}: expected theta,u", lineno + 1)))?;
            text.parse().map_err(|e| GeomError::InvalidInput(format!("line {}: '{text}': {e}", lineno + 1)))
        };
        let theta = next()?;
        let u = next()?;
        if fields.next().is_some() {
            return Err(GeomError::InvalidInput(format!("line {}: more than two columns", lineno + 1)));
        }
        rows.push((theta, u));
    }
    if rows.len() < 3 {
        return Err(GeomError::InvalidInput(format!("profile has {} rows, need at least 3", rows.len())));
    }
    let m = (rows.len() - 1) as f64;
    for (i, (theta, _)) in rows.iter().enumerate() {
        let expected = PI * i as f64 / m;
        if (theta - expected).abs() > 1e-12 {
            return Err(GeomError::InvalidInput(format!(
                "row {i}: theta = {theta} is not the uniform grid value {expected}"
            )));
        }
    }
    Profile::from_samples(rows.into_iter().map(|(_, u)| u).collect())
}
