//! Plain-text file formats for point clouds and poses.
//!
//! Clouds are one `x y z` line per point, poses a quaternion line
//! followed by a translation line. Both formats are UTF-8 with LF line
//! endings, allow blank lines, and treat `#` to end-of-line as comment.
//! Floats are written with Rust's shortest round-trip formatting, so a
//! write/read cycle reproduces cloud coordinates bit for bit; pose
//! quaternions are renormalized on read.

use crate::cloud::PointCloud;
use crate::fitter::PoseEstimate;
use crate::quat::UnitQuaternion;
use crate::{Error, Result};
use std::fs;
use std::path::Path;

fn parse_floats(line: &str, line_no: usize, want: usize) -> Result<Vec<f64>> {
    let values: Vec<f64> = line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("expected a decimal float, found {tok:?}"),
            })
        })
        .collect::<Result<_>>()?;
    if values.len() != want {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected {want} numbers, found {}", values.len()),
        });
    }
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Parse {
            line: line_no,
            message: format!("non-finite value {bad}"),
        });
    }
    Ok(values)
}

/// Strips the `#` comment, yielding the data portion (possibly empty).
fn data_part(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Writes one `x y z` line per point.
pub fn write_cloud<P: AsRef<Path>>(path: P, cloud: &PointCloud) -> Result<()> {
    let mut out = String::with_capacity(cloud.len() * 24);
    out.push_str("# point cloud: x y z per line\n");
    for p in &cloud.points {
        out.push_str(&format!("{} {} {}\n", p[0], p[1], p[2]));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads a cloud written by [`write_cloud`] or any whitespace-separated
/// three-column float file with `#` comments.
pub fn read_cloud<P: AsRef<Path>>(path: P) -> Result<PointCloud> {
    let text = fs::read_to_string(path)?;
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = data_part(raw);
        if line.is_empty() {
            continue;
        }
        let v = parse_floats(line, i + 1, 3)?;
        points.push([v[0], v[1], v[2]]);
    }
    if points.is_empty() {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            message: "file contains no points".into(),
        });
    }
    Ok(PointCloud::new(points))
}

/// Writes a pose as a `w x y z` quaternion line and a `tx ty tz` line.
pub fn write_pose<P: AsRef<Path>>(path: P, pose: &PoseEstimate) -> Result<()> {
    let q = pose.rotation.components();
    let t = pose.translation;
    let out = format!(
        "# pose: quaternion w x y z, then translation x y z\n{} {} {} {}\n{} {} {}\n",
        q[0], q[1], q[2], q[3], t[0], t[1], t[2]
    );
    fs::write(path, out)?;
    Ok(())
}

/// Reads a pose written by [`write_pose`]. The quaternion must be unit
/// up to 1e-6 and is renormalized exactly.
pub fn read_pose<P: AsRef<Path>>(path: P) -> Result<PoseEstimate> {
    let text = fs::read_to_string(path)?;
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = data_part(raw);
        if line.is_empty() {
            continue;
        }
        let want = if rows.is_empty() { 4 } else { 3 };
        rows.push((i + 1, parse_floats(line, i + 1, want)?));
    }
    let last_line = text.lines().count().max(1);
    if rows.len() != 2 {
        return Err(Error::Parse {
            line: last_line,
            message: format!(
                "expected a quaternion line and a translation line, found {} data lines",
                rows.len()
            ),
        });
    }
    let (q_line, q) = (&rows[0].0, &rows[0].1);
    let norm = q.iter().map(|c| c * c).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::Parse {
            line: *q_line,
            message: format!("quaternion norm {norm} is not within 1e-6 of one"),
        });
    }
    let rotation = UnitQuaternion::normalize([q[0], q[1], q[2], q[3]]).map_err(|_| {
        Error::Parse {
            line: *q_line,
            message: "quaternion cannot be normalized".into(),
        }
    })?;
    let t = &rows[1].1;
    Ok(PoseEstimate {
        rotation,
        translation: [t[0], t[1], t[2]],
    })
}
