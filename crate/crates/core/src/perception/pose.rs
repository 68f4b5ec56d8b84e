use serde::{Deserialize, Serialize};

use super::{Heatmap, Peak};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum KeypointKind {
    Head,
    Trunk,
    LeftHand,
    RightHand,
    LeftFoot,
    RightFoot,
}

impl KeypointKind {
    pub const ALL: [KeypointKind; 6] = [
        KeypointKind::Head,
        KeypointKind::Trunk,
        KeypointKind::LeftHand,
        KeypointKind::RightHand,
        KeypointKind::LeftFoot,
        KeypointKind::RightFoot,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Star topology around the trunk.
pub const LIMBS: [(KeypointKind, KeypointKind); 5] = [
    (KeypointKind::Trunk, KeypointKind::Head),
    (KeypointKind::Trunk, KeypointKind::LeftHand),
    (KeypointKind::Trunk, KeypointKind::RightHand),
    (KeypointKind::Trunk, KeypointKind::LeftFoot),
    (KeypointKind::Trunk, KeypointKind::RightFoot),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "camelCase", deny_unknown_fields)]
pub struct AssemblyParams {
    pub samples_per_limb: usize,
    pub limb_threshold: f64,
}

impl Default for AssemblyParams {
    fn default() -> Self {
        AssemblyParams {
            samples_per_limb: 10,
            limb_threshold: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PoseKeypoint {
    pub kind: KeypointKind,
    pub x: f64,
    pub y: f64,
    pub score: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LimbScore {
    pub from: KeypointKind,
    pub to: KeypointKind,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RobotPose {
    pub keypoints: Vec<PoseKeypoint>,
    pub limb_scores: Vec<LimbScore>,
}

impl RobotPose {
    pub fn keypoint(&self, kind: KeypointKind) -> Option<&PoseKeypoint> {
        self.keypoints.iter().find(|k| k.kind == kind)
    }
}

fn limb_score(map: &Heatmap, a: &Peak, b: &Peak, samples: usize) -> f64 {
    if samples == 0 {
        return 0.0;
    }
    let sum: f64 = (0..samples)
        .map(|i| {
            let s = if samples == 1 { 0.5 } else { i as f64 / (samples - 1) as f64 };
            map.sample(a.x + s * (b.x - a.x), a.y + s * (b.y - a.y))
        })
        .sum();
    sum / samples as f64
}

struct Candidate {
    limb: usize,
    a: usize,
    b: usize,
    score: f64,
}

/// Greedy association of keypoint peaks into poses.
///
/// `peaks[k]` holds the detections of keypoint kind `k` and `limb_maps[l]` the evidence
/// for limb `LIMBS[l]`. Within each limb, candidate pairs are taken best first and a
/// keypoint is used at most once; equal scores go to the lower keypoint indices. Accepted
/// limbs sharing a trunk form one pose, and poses need at least two keypoints.
pub fn assemble_poses(peaks: &[Vec<Peak>; 6], limb_maps: &[Heatmap; 5], params: &AssemblyParams) -> Vec<RobotPose> {
    let mut accepted: Vec<Candidate> = Vec::new();
    for (l, &(ka, kb)) in LIMBS.iter().enumerate() {
        let (pa, pb) = (&peaks[ka.index()], &peaks[kb.index()]);
        let mut cands: Vec<Candidate> = Vec::with_capacity(pa.len() * pb.len());
        for (i, a) in pa.iter().enumerate() {
            for (j, b) in pb.iter().enumerate() {
                cands.push(Candidate {
                    limb: l,
                    a: i,
                    b: j,
                    score: limb_score(&limb_maps[l], a, b, params.samples_per_limb),
                });
            }
        }
        cands.sort_by(|x, y| y.score.total_cmp(&x.score).then(x.a.cmp(&y.a)).then(x.b.cmp(&y.b)));
        let mut used_a = vec![false; pa.len()];
        let mut used_b = vec![false; pb.len()];
        for c in cands {
            if c.score < params.limb_threshold || used_a[c.a] || used_b[c.b] {
                continue;
            }
            used_a[c.a] = true;
            used_b[c.b] = true;
            accepted.push(c);
        }
    }

    // every limb hangs off a trunk, so components are keyed by trunk index
    let trunks = &peaks[KeypointKind::Trunk.index()];
    let mut poses = Vec::new();
    for (t, trunk) in trunks.iter().enumerate() {
        let mut limbs: Vec<&Candidate> = accepted.iter().filter(|c| c.a == t).collect();
        if limbs.is_empty() {
            continue;
        }
        limbs.sort_by_key(|c| c.limb);
        let mut keypoints = vec![PoseKeypoint {
            kind: KeypointKind::Trunk,
            x: trunk.x,
            y: trunk.y,
            score: trunk.score,
        }];
        let mut limb_scores = Vec::new();
        for c in limbs {
            let (from, to) = LIMBS[c.limb];
            let p = &peaks[to.index()][c.b];
            keypoints.push(PoseKeypoint {
                kind: to,
                x: p.x,
                y: p.y,
                score: p.score,
            });
            limb_scores.push(LimbScore { from, to, score: c.score });
        }
        keypoints.sort_by_key(|k| k.kind);
        poses.push(RobotPose { keypoints, limb_scores });
    }
    poses.retain(|p| p.keypoints.len() >= 2);
    poses
}
