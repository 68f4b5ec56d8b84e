//! Heatmap post-processing: Gaussian targets, subpixel peak extraction and greedy
//! assembly of keypoints and limbs into robot poses.

mod pgm;
mod pose;
pub mod scene;

pub use pgm::{read_pgm, write_pgm};
pub use pose::{assemble_poses, AssemblyParams, KeypointKind, LimbScore, PoseKeypoint, RobotPose, LIMBS};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Single-channel score map with values in `[0, 1]`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Heatmap {
    width: usize,
    height: usize,
    pub channel: u32,
    values: Vec<f64>,
}

impl Heatmap {
    pub fn zeros(width: usize, height: usize) -> Result<Self> {
        if width < 3 || height < 3 {
            return Err(Error::InvalidInput(format!("heatmap {width}x{height} is smaller than 3x3")));
        }
        Ok(Heatmap {
            width,
            height,
            channel: 0,
            values: vec![0.0; width * height],
        })
    }

    /// Builds a map from row-major values, clamping them into `[0, 1]`.
    pub fn from_values(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        let mut h = Heatmap::zeros(width, height)?;
        if values.len() != width * height {
            return Err(Error::InvalidInput(format!(
                "{} values for a {width}x{height} heatmap",
                values.len()
            )));
        }
        h.values = values.into_iter().map(clamp_unit).collect();
        Ok(h)
    }

    pub fn with_channel(mut self, channel: u32) -> Self {
        self.channel = channel;
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.values[y * self.width + x] = clamp_unit(v);
    }

    /// Pixelwise maximum with another map of the same size.
    pub fn max_with(&mut self, other: &Heatmap) -> Result<()> {
        if (self.width, self.height) != (other.width, other.height) {
            return Err(Error::InvalidInput("heatmap sizes differ".into()));
        }
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a = a.max(*b);
        }
        Ok(())
    }

    /// Bilinear sample, zero outside the image.
    pub fn sample(&self, x: f64, y: f64) -> f64 {
        if !(x >= 0.0 && y >= 0.0 && x <= (self.width - 1) as f64 && y <= (self.height - 1) as f64) {
            return 0.0;
        }
        let (x0, y0) = (x.floor() as usize, y.floor() as usize);
        let (x1, y1) = ((x0 + 1).min(self.width - 1), (y0 + 1).min(self.height - 1));
        let (fx, fy) = (x - x0 as f64, y - y0 as f64);
        let top = self.get(x0, y0) * (1.0 - fx) + self.get(x1, y0) * fx;
        let bottom = self.get(x0, y1) * (1.0 - fx) + self.get(x1, y1) * fx;
        top * (1.0 - fy) + bottom * fy
    }
}

fn clamp_unit(v: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(0.0, 1.0)
    }
}

/// Unnormalised Gaussian blob. Centers off the image just clip the support.
pub fn render_gaussian(center: (f64, f64), sigma: f64, width: usize, height: usize) -> Result<Heatmap> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidInput(format!("sigma {sigma} must be positive")));
    }
    let mut h = Heatmap::zeros(width, height)?;
    let k = 1.0 / (2.0 * sigma * sigma);
    for y in 0..height {
        let dy = y as f64 - center.1;
        for x in 0..width {
            let dx = x as f64 - center.0;
            h.values[y * width + x] = (-(dx * dx + dy * dy) * k).exp();
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Peak {
    pub x: f64,
    pub y: f64,
    pub score: f64,
    pub class_id: u32,
}

/// Local maxima over the 3x3 neighbourhood with value at least `threshold`.
///
/// Equal neighbours are resolved in favour of the lower raster index, so a plateau of
/// equal values yields one peak. Positions are refined by fitting a parabola to the log
/// intensities along each axis, which is exact for Gaussian blobs.
pub fn extract_peaks(h: &Heatmap, threshold: f64) -> Vec<Peak> {
    let (w, ht) = (h.width as isize, h.height as isize);
    let mut peaks = Vec::new();
    for y in 0..ht {
        for x in 0..w {
            let idx = y * w + x;
            let v = h.values[idx as usize];
            if v <= 0.0 || v < threshold {
                continue;
            }
            let mut is_max = true;
            'nb: for dy in -1..=1 {
                for dx in -1..=1 {
                    let (nx, ny) = (x + dx, y + dy);
                    if (dx, dy) == (0, 0) || nx < 0 || ny < 0 || nx >= w || ny >= ht {
                        continue;
                    }
                    let nidx = ny * w + nx;
                    let n = h.values[nidx as usize];
                    if n > v || (n == v && nidx < idx) {
                        is_max = false;
                        break 'nb;
                    }
                }
            }
            if !is_max {
                continue;
            }
            let at = |xx: isize, yy: isize| -> Option<f64> {
                (xx >= 0 && yy >= 0 && xx < w && yy < ht).then(|| h.values[(yy * w + xx) as usize])
            };
            let ox = refine(at(x - 1, y), v, at(x + 1, y));
            let oy = refine(at(x, y - 1), v, at(x, y + 1));
            peaks.push(Peak {
                x: x as f64 + ox,
                y: y as f64 + oy,
                score: v,
                class_id: h.channel,
            });
        }
    }
    // scan order already breaks ties by lower index; sort is stable
    peaks.sort_by(|a, b| b.score.total_cmp(&a.score));
    peaks
}

fn refine(left: Option<f64>, center: f64, right: Option<f64>) -> f64 {
    let (Some(l), Some(r)) = (left, right) else {
        return 0.0;
    };
    let off = if l > 0.0 && r > 0.0 {
        let (ll, lc, lr) = (l.ln(), center.ln(), r.ln());
        let curv = ll - 2.0 * lc + lr;
        if curv < 0.0 {
            0.5 * (ll - lr) / curv
        } else {
            0.0
        }
    } else {
        let s = l + center + r;
        (r - l) / s
    };
    off.clamp(-0.5, 0.5)
}
