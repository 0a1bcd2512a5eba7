use obbkit::data::{
    generate_synthetic, read_annotation_dir, read_detections, synthetic_proposals, write_annotation_dir,
    write_detections, SyntheticSceneConfig,
};
use obbkit::Error;

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("obbkit-io-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn annotation_dir_round_trip_is_exact() {
    let cfg = SyntheticSceneConfig { images: 5, objects_per_image: 12, seed: 21, ..Default::default() };
    let data = generate_synthetic::<f64>(&cfg).unwrap();
    let dir = scratch("ann");
    write_annotation_dir(&dir.join("a"), &data.images, &data.annotations).unwrap();
    let (images, anns) = read_annotation_dir::<f64>(&dir.join("a")).unwrap();
    assert_eq!(images, data.images);
    assert_eq!(anns.len(), data.annotations.len());
    // second write of the parsed values must reproduce the files byte for byte
    write_annotation_dir(&dir.join("b"), &images, &anns).unwrap();
    let (_, again) = read_annotation_dir::<f64>(&dir.join("b")).unwrap();
    assert_eq!(again, anns);
    for img in &images {
        let a = std::fs::read(dir.join("a").join(format!("{img}.txt"))).unwrap();
        let b = std::fs::read(dir.join("b").join(format!("{img}.txt"))).unwrap();
        assert_eq!(a, b);
    }
    for (orig, read) in data.annotations.iter().zip(&anns) {
        for (p, q) in orig.obb.corners().iter().zip(read.obb.corners()) {
            assert!((p.x - q.x).abs() <= 5e-7 && (p.y - q.y).abs() <= 5e-7);
        }
    }
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn detection_round_trip_is_exact() {
    let cfg = SyntheticSceneConfig { images: 3, objects_per_image: 5, seed: 22, ..Default::default() };
    let data = generate_synthetic::<f64>(&cfg).unwrap();
    let dets = synthetic_proposals(&data.annotations, 3, 2.0, 5).unwrap();
    let dir = scratch("det");
    write_detections(&dir.join("a.txt"), &dets).unwrap();
    let read = read_detections::<f64>(&dir.join("a.txt")).unwrap();
    write_detections(&dir.join("b.txt"), &read).unwrap();
    assert_eq!(read_detections::<f64>(&dir.join("b.txt")).unwrap(), read);
    assert_eq!(std::fs::read(dir.join("a.txt")).unwrap(), std::fs::read(dir.join("b.txt")).unwrap());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn malformed_line_names_file_and_line() {
    let dir = scratch("bad");
    std::fs::write(dir.join("P1.txt"), "0 0 4 0 4 2 0 2 car 0\n0 0 4 0 4 2 0 two car 0\n").unwrap();
    let err = read_annotation_dir::<f64>(&dir).unwrap_err();
    match &err {
        Error::Parse { file, line, .. } => {
            assert!(file.ends_with("P1.txt"));
            assert_eq!(*line, 2);
        }
        other => panic!("unexpected {other:?}"),
    }
    assert!(err.to_string().contains("P1.txt:2"));
    std::fs::remove_dir_all(dir).unwrap();
}
