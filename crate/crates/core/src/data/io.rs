//! Plain-text record formats.
//!
//! Annotation files hold one object per line,
//! `x1 y1 x2 y2 x3 y3 x4 y4 category difficult`; the image id is the file
//! stem. Detection files hold `image_id category score x1 y1 ... x4 y4`.
//! Numbers are written with six fractional digits, and reading a written
//! file gives back exactly the written values.

use std::fs;
use std::path::Path;

use crate::data::{Annotation, DetectionRecord};
use crate::error::{Error, Result};
use crate::geom::{min_area_rect, Obb, Point2};
use crate::pipeline::Detection;
use crate::scalar::Scalar;

/// Rectangle tolerance when reading files; coordinates only carry six
/// decimals, so the in-memory tolerance would reject small written boxes.
pub const IO_RECT_TOL: f64 = 1e-4;

fn parse_err(file: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { file: file.to_string(), line, msg: msg.into() }
}

fn num<T: Scalar>(tok: &str, file: &str, line: usize) -> Result<T> {
    let v: f64 = tok.parse().map_err(|_| parse_err(file, line, format!("not a number: {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(file, line, format!("non-finite value {tok:?}")));
    }
    Ok(T::lit(v))
}

/// Quad to box: kept verbatim when it is a rectangle within
/// [`IO_RECT_TOL`], otherwise replaced by its minimum-area rectangle.
fn quad_to_obb<T: Scalar>(c: [Point2<T>; 4], file: &str, line: usize) -> Result<Obb<T>> {
    match Obb::with_tolerance(c, T::lit(IO_RECT_TOL)) {
        Ok(b) => Ok(b),
        Err(Error::NotRectangle(_)) => min_area_rect(&c).map_err(|e| parse_err(file, line, e.to_string())),
        Err(e) => Err(parse_err(file, line, e.to_string())),
    }
}

fn quad<T: Scalar>(toks: &[&str], file: &str, line: usize) -> Result<[Point2<T>; 4]> {
    let mut v = [T::zero(); 8];
    for (slot, tok) in v.iter_mut().zip(toks) {
        *slot = num(tok, file, line)?;
    }
    Ok(std::array::from_fn(|i| Point2::new(v[2 * i], v[2 * i + 1])))
}

fn is_header(line: &str) -> bool {
    line.starts_with("imagesource:") || line.starts_with("gsd:")
}

pub fn parse_annotations<T: Scalar>(text: &str, image: &str, file: &str) -> Result<Vec<Annotation<T>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || is_header(line) {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 10 {
            return Err(parse_err(file, line_no, format!("expected 10 fields, found {}", toks.len())));
        }
        let obb = quad_to_obb(quad(&toks[..8], file, line_no)?, file, line_no)?;
        let difficult = match toks[9] {
            "0" => false,
            "1" => true,
            other => return Err(parse_err(file, line_no, format!("difficult must be 0 or 1, found {other:?}"))),
        };
        out.push(Annotation { image: image.to_string(), category: toks[8].to_string(), obb, difficult });
    }
    Ok(out)
}

pub fn parse_detections<T: Scalar>(text: &str, file: &str) -> Result<Vec<DetectionRecord<T>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 11 {
            return Err(parse_err(file, line_no, format!("expected 11 fields, found {}", toks.len())));
        }
        let score: T = num(toks[2], file, line_no)?;
        let obb = quad_to_obb(quad(&toks[3..], file, line_no)?, file, line_no)?;
        let det = Detection::new(obb, toks[1], score).map_err(|e| parse_err(file, line_no, e.to_string()))?;
        out.push(DetectionRecord { image: toks[0].to_string(), det });
    }
    Ok(out)
}

/// Whitespace- or comma-separated `x y` pairs, one per line; `#` starts a
/// comment.
pub fn parse_points<T: Scalar>(text: &str, file: &str) -> Result<Vec<Point2<T>>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).collect();
        if toks.len() != 2 {
            return Err(parse_err(file, i + 1, format!("expected 2 coordinates, found {}", toks.len())));
        }
        out.push(Point2::new(num(toks[0], file, i + 1)?, num(toks[1], file, i + 1)?));
    }
    Ok(out)
}

fn corners_text<T: Scalar>(obb: &Obb<T>) -> String {
    obb.corners().iter().map(|p| format!("{:.6} {:.6}", p.x, p.y)).collect::<Vec<_>>().join(" ")
}

pub fn format_annotation<T: Scalar>(a: &Annotation<T>) -> String {
    format!("{} {} {}", corners_text(&a.obb), a.category, u8::from(a.difficult))
}

pub fn format_detection<T: Scalar>(d: &DetectionRecord<T>) -> String {
    format!("{} {} {:.6} {}", d.image, d.det.category, d.det.score, corners_text(&d.det.obb))
}

fn file_label(path: &Path) -> String {
    path.display().to_string()
}

pub fn read_annotations<T: Scalar>(path: &Path) -> Result<Vec<Annotation<T>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let image = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    parse_annotations(&text, &image, &file_label(path))
}

/// Every `*.txt` file in `dir`, in file-name order. Returns the image ids
/// (including images without objects) and all annotations.
pub fn read_annotation_dir<T: Scalar>(dir: &Path) -> Result<(Vec<String>, Vec<Annotation<T>>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    let mut images = Vec::new();
    let mut all = Vec::new();
    for f in files {
        images.push(f.file_stem().unwrap().to_string_lossy().into_owned());
        all.extend(read_annotations(&f)?);
    }
    Ok((images, all))
}

pub fn write_annotations<T: Scalar>(path: &Path, anns: &[Annotation<T>]) -> Result<()> {
    let mut text = String::new();
    for a in anns {
        text.push_str(&format_annotation(a));
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

/// One `<image>.txt` per image id, including empty ones.
pub fn write_annotation_dir<T: Scalar>(dir: &Path, images: &[String], anns: &[Annotation<T>]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for img in images {
        let mine: Vec<Annotation<T>> = anns.iter().filter(|a| &a.image == img).cloned().collect();
        write_annotations(&dir.join(format!("{img}.txt")), &mine)?;
    }
    Ok(())
}

pub fn read_detections<T: Scalar>(path: &Path) -> Result<Vec<DetectionRecord<T>>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_detections(&text, &file_label(path))
}

pub fn write_detections<T: Scalar>(path: &Path, dets: &[DetectionRecord<T>]) -> Result<()> {
    let mut text = String::new();
    for d in dets {
        text.push_str(&format_detection(d));
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_dota_lines() {
        let text = "imagesource:GoogleEarth\ngsd:0.146\n10 10 30 10 30 20 10 20 plane 0\n\n1 1 5 1 5 3 1 3 ship 1\n";
        let a: Vec<Annotation<f64>> = parse_annotations(text, "P0001", "P0001.txt").unwrap();
        assert_eq!(a.len(), 2);
        assert_eq!(a[0].category, "plane");
        assert!(a[1].difficult);
        assert_eq!(a[0].obb.area(), 200.0);
    }

    #[test]
    fn clockwise_and_general_quads() {
        // DOTA lists corners clockwise in image coordinates
        let a: Vec<Annotation<f64>> = parse_annotations("0 0 0 10 20 10 20 0 car 0", "x", "x").unwrap();
        assert_eq!(a[0].obb.area(), 200.0);
        let q: Vec<Annotation<f64>> = parse_annotations("0 0 10 0 12 5 0 5 car 0", "x", "x").unwrap();
        assert!(q[0].obb.area() >= 55.0 - 1e-9);
    }

    #[test]
    fn reports_file_and_line() {
        let err = parse_annotations::<f64>("0 0 1 0 1 1 0 1 a 0\n0 0 1 0 1 1 0 a 0\n", "x", "f.txt").unwrap_err();
        assert_eq!(err, Error::Parse { file: "f.txt".into(), line: 2, msg: "expected 10 fields, found 9".into() });
        let err = parse_annotations::<f64>("0 0 1 0 1 1 0 1 a 2", "x", "f.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_annotations::<f64>("0 0 1 0 nan 1 0 1 a 0", "x", "f.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_detections::<f64>("im a 1.5 0 0 1 0 1 1 0 1", "d.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_annotations::<f64>("0 0 0 0 0 0 0 0 a 0", "x", "f.txt").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn detection_line_round_trip() {
        let text = "P7 plane 0.912345 10.000000 10.000000 30.000000 10.000000 30.000000 20.000000 10.000000 20.000000";
        let d: Vec<DetectionRecord<f64>> = parse_detections(text, "d").unwrap();
        assert_eq!(format_detection(&d[0]), text);
    }

    #[test]
    fn points() {
        let p: Vec<Point2<f64>> = parse_points("# hull input\n0 0\n1,0\n 1 1 # corner\n", "p").unwrap();
        assert_eq!(p.len(), 3);
        assert!(parse_points::<f64>("1 2 3", "p").is_err());
    }
}
