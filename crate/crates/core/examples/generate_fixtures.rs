//! Writes the procedural test scenes to disk.
//!
//! `cargo run --example generate_fixtures -- [dir] [size]`

use std::path::PathBuf;

use wstv::{fixtures, save_image};

fn main() -> wstv::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "fixtures".into()));
    let size: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(256);
    std::fs::create_dir_all(&dir).map_err(|e| wstv::Error::Io { path: dir.clone(), source: e })?;
    for name in fixtures::NAMES {
        let img = fixtures::by_name(name, size).expect("listed fixture exists");
        let ext = if img.channels() == 1 { "pgm" } else { "ppm" };
        let path = dir.join(format!("{name}.{ext}"));
        save_image(&img, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
