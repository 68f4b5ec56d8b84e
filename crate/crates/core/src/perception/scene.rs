//! Synthetic network outputs for robots drawn as stick figures.

use super::{extract_peaks, render_gaussian, Heatmap, KeypointKind, Peak, LIMBS};
use crate::error::Result;

/// Limb evidence falls off with this width across the segment, px.
const LIMB_WIDTH: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotFigure {
    /// Pixel position of each keypoint, indexed by [`KeypointKind::index`].
    pub keypoints: [(f64, f64); 6],
}

impl RobotFigure {
    /// Standing robot about 45 px tall at `scale` 1.
    pub fn upright(trunk: (f64, f64), scale: f64) -> Self {
        let (x, y) = trunk;
        let at = |dx: f64, dy: f64| (x + dx * scale, y + dy * scale);
        RobotFigure {
            keypoints: [
                at(0.0, -18.0),
                at(0.0, 0.0),
                at(-13.0, 4.0),
                at(13.0, 4.0),
                at(-7.0, 26.0),
                at(7.0, 26.0),
            ],
        }
    }

    pub fn get(&self, kind: KeypointKind) -> (f64, f64) {
        self.keypoints[kind.index()]
    }
}

/// Keypoint and limb maps of a scene.
#[derive(Debug, Clone)]
pub struct Scene {
    pub keypoints: [Heatmap; 6],
    pub limbs: [Heatmap; 5],
}

impl Scene {
    pub fn peaks(&self, threshold: f64) -> [Vec<Peak>; 6] {
        std::array::from_fn(|k| extract_peaks(&self.keypoints[k], threshold))
    }
}

pub fn render_scene(figures: &[RobotFigure], width: usize, height: usize, sigma: f64) -> Result<Scene> {
    let blank = Heatmap::zeros(width, height)?;
    let mut keypoints: [Heatmap; 6] = std::array::from_fn(|k| blank.clone().with_channel(k as u32));
    let mut limbs: [Heatmap; 5] = std::array::from_fn(|l| blank.clone().with_channel(l as u32));
    for (k, map) in keypoints.iter_mut().enumerate() {
        for f in figures {
            map.max_with(&render_gaussian(f.keypoints[k], sigma, width, height)?)?;
        }
    }
    for (map, (a, b)) in limbs.iter_mut().zip(LIMBS) {
        for f in figures {
            paint_segment(map, f.get(a), f.get(b), LIMB_WIDTH);
        }
    }
    Ok(Scene { keypoints, limbs })
}

/// Paints a soft line from `a` to `b`, keeping the maximum with existing values.
pub fn paint_segment(map: &mut Heatmap, a: (f64, f64), b: (f64, f64), width: f64) {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    for y in 0..map.height() {
        for x in 0..map.width() {
            let (px, py) = (x as f64 - a.0, y as f64 - a.1);
            let s = if len2 > 0.0 { ((px * dx + py * dy) / len2).clamp(0.0, 1.0) } else { 0.0 };
            let (ex, ey) = (px - s * dx, py - s * dy);
            let v = (-(ex * ex + ey * ey) / (2.0 * width * width)).exp();
            if v > map.get(x, y) {
                map.set(x, y, v);
            }
        }
    }
}
