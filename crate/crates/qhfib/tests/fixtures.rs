use std::path::PathBuf;

use qhfib::catalog;
use qhfib::fixture::{load_path, FixtureDocument};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

#[test]
fn shipped_files_match_the_catalog() {
    let shipped = catalog::shipped().unwrap();
    let mut on_disk: Vec<String> = std::fs::read_dir(dir())
        .unwrap()
        .filter_map(|e| e.ok()?.path().file_stem()?.to_str().map(String::from))
        .collect();
    on_disk.sort();
    let mut stems: Vec<String> = shipped.iter().map(|(s, _)| s.clone()).collect();
    stems.sort();
    assert_eq!(on_disk, stems);
    for (stem, doc) in shipped {
        let path = dir().join(format!("{stem}.json"));
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(FixtureDocument::parse(&text).unwrap(), doc, "{stem}");
        assert_eq!(load_path(&path).unwrap(), doc.load().unwrap(), "{stem}");
    }
}
