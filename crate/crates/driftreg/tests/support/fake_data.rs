//! Small random datasets laid out like the real ones, so the full matrix can
//! run without the UCI downloads. The concrete spreadsheet is replaced by a
//! CSV with the same column positions.

use std::fmt::Write as _;
use std::path::Path;

use driftreg::dataset::{FileEntry, Manifest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn table(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    let weights: Vec<f64> = (0..cols).map(|_| rng.random_range(-2.0..2.0)).collect();
    (0..rows)
        .map(|i| {
            let drift = if i > rows / 2 { 3.0 } else { 0.0 };
            let mut row: Vec<f64> = (0..cols - 1)
                .map(|_| rng.random_range(0.0..10.0) + drift)
                .collect();
            let y = row.iter().zip(&weights).map(|(x, w)| x * w).sum::<f64>()
                + rng.random_range(-1.0..1.0);
            row.push(y);
            row
        })
        .collect()
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<f64>], sep: char, decimal_comma: bool) {
    let mut s = header.join(&sep.to_string());
    s.push('\n');
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .map(|v| {
                let t = format!("{v:.4}");
                if decimal_comma {
                    t.replace('.', ",")
                } else {
                    t
                }
            })
            .collect();
        let _ = writeln!(s, "{}", cells.join(&sep.to_string()));
    }
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    std::fs::write(path, s).unwrap();
}

/// Writes every dataset under `dir` with `rows` records each and returns the
/// manifest that reads them.
pub fn write_all(dir: &Path, rows: usize, seed: u64) -> Manifest {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // air quality: the three targets follow the eight features
    let aq_header = [
        "Date", "Time", "CO(GT)", "PT08.S1(CO)", "NMHC(GT)", "C6H6(GT)", "PT08.S2(NMHC)",
        "NOx(GT)", "PT08.S3(NOx)", "NO2(GT)", "PT08.S4(NO2)", "PT08.S5(O3)", "T", "RH", "AH",
    ];
    let base = table(&mut rng, rows, 9);
    let aq: Vec<Vec<f64>> = base
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let y = r[8];
            let co = if i % 97 == 5 { -200.0 } else { y };
            vec![
                i as f64, 0.0, co, r[0], y * 0.5 + r[1], 1.0, r[1], 1.0, r[2], y - r[3], r[3],
                r[4], r[5], r[6], r[7],
            ]
        })
        .collect();
    write_csv(&dir.join("air_quality/AirQualityUCI.csv"), &aq_header, &aq, ';', true);

    let concrete = table(&mut rng, rows, 9);
    let header: Vec<String> = (0..9).map(|i| format!("c{i}")).collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(&dir.join("concrete/Concrete_Data.csv"), &header, &concrete, ',', false);

    let protein: Vec<Vec<f64>> = table(&mut rng, rows, 10)
        .into_iter()
        .map(|mut r| {
            let y = r.pop().unwrap();
            let mut out = vec![y];
            out.extend(r);
            out
        })
        .collect();
    let header = ["RMSD", "F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8", "F9"];
    write_csv(&dir.join("protein/CASP.csv"), &header, &protein, ',', false);

    let turbine_header = [
        "AT", "AP", "AH", "AFDP", "GTEP", "TIT", "TAT", "TEY", "CDP", "CO", "NOX",
    ];
    let per_file = rows / 5 + 1;
    for year in 2011..=2015 {
        let t: Vec<Vec<f64>> = table(&mut rng, per_file, 9)
            .into_iter()
            .map(|r| {
                let mut out = r[..8].to_vec();
                out.insert(7, r[8]);
                out.push(r[8] * 0.3 + r[0]);
                out.push(r[8] - r[2]);
                out
            })
            .collect();
        write_csv(&dir.join(format!("turbine/gt_{year}.csv")), &turbine_header, &t, ',', false);
    }

    let mut manifest = Manifest::builtin();
    for d in &mut manifest.datasets {
        if d.name == "concrete" {
            d.files = vec![FileEntry {
                name: "Concrete_Data.csv".into(),
                sha256: String::new(),
            }];
        }
    }
    manifest
}
