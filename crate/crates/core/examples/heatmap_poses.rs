//! Renders a two-robot scene, extracts keypoint peaks and assembles them into poses.
//! Pass a directory to also dump the trunk heatmap as a 16-bit PGM.

use std::fs::File;
use std::io::BufWriter;

use humanoid_motion::perception::scene::{render_scene, RobotFigure};
use humanoid_motion::perception::{assemble_poses, write_pgm, AssemblyParams, KeypointKind};

fn main() -> humanoid_motion::Result<()> {
    let robots = [RobotFigure::upright((60.3, 50.0), 1.0), RobotFigure::upright((161.7, 54.2), 1.2)];
    let scene = render_scene(&robots, 240, 120, 3.0)?;
    let peaks = scene.peaks(0.5);
    for kind in KeypointKind::ALL {
        let p = &peaks[kind.index()];
        let xs: Vec<String> = p.iter().map(|p| format!("({:.2}, {:.2})", p.x, p.y)).collect();
        println!("{kind:?}: {}", xs.join(" "));
    }
    let poses = assemble_poses(&peaks, &scene.limbs, &AssemblyParams::default());
    println!("{}", serde_json::to_string_pretty(&poses)?);

    if let Some(dir) = std::env::args().nth(1) {
        let path = std::path::Path::new(&dir).join("trunk.pgm");
        write_pgm(&scene.keypoints[KeypointKind::Trunk.index()], BufWriter::new(File::create(&path)?))?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
