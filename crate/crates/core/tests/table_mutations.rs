use cycalc_core::intersection::CoverDiagram;
use cycalc_core::invariants::{h3_of_cover, hc2_of_cover, QuotientData};
use cycalc_core::rational::{q, qi};
use cycalc_core::tables::{self, Dataset, Family, TableRow};

const DELTAS: [i64; 4] = [-2, -1, 1, 2];

fn shipped() -> Dataset {
    tables::load_dataset().unwrap()
}

fn with_row(ds: &Dataset, idx: usize, edit: impl FnOnce(&mut TableRow)) -> Dataset {
    let mut out = ds.clone();
    edit(&mut out.rows[idx]);
    out
}

fn shift_u32(v: u32, d: i64) -> Option<u32> {
    u32::try_from(i64::from(v) + d).ok()
}

/// Every single-field mutation of every row, except `refs`.
fn mutants(ds: &Dataset) -> Vec<(String, Dataset)> {
    let mut out = Vec::new();
    for (i, row) in ds.rows.iter().enumerate() {
        let label = row.label();
        for d in DELTAS {
            if let Some(n) = shift_u32(row.n, d) {
                out.push((format!("{label} N{d:+}"), with_row(ds, i, |r| r.n = n)));
            }
            if let Some(s) = shift_u32(row.s, d) {
                out.push((format!("{label} s{d:+}"), with_row(ds, i, |r| r.s = s)));
            }
            out.push((format!("{label} h3{d:+}"), with_row(ds, i, |r| r.h3 += d)));
            out.push((format!("{label} hc2{d:+}"), with_row(ds, i, |r| r.hc2 += d)));
            for j in 0..row.e_values.len() {
                out.push((
                    format!("{label} e[{j}]{d:+}"),
                    with_row(ds, i, |r| r.e_values[j].value += d),
                ));
            }
        }
        for f in Family::ALL.into_iter().filter(|f| *f != row.family) {
            out.push((format!("{label} family={f}"), with_row(ds, i, |r| r.family = f)));
        }
        for j in 0..row.e_values.len() {
            out.push((
                format!("{label} e[{j}] star toggled"),
                with_row(ds, i, |r| r.e_values[j].starred ^= true),
            ));
        }
    }
    out
}

#[test]
fn shipped_dataset_passes() {
    let report = tables::validate_all(&shipped());
    assert!(report.passed, "{report:?}");
}

#[test]
fn every_single_field_mutation_is_detected() {
    let ds = shipped();
    let all = mutants(&ds);
    assert!(all.len() > 900, "{} mutants", all.len());
    let missed: Vec<&String> = all
        .iter()
        .filter(|(_, m)| tables::validate_all(m).passed)
        .map(|(name, _)| name)
        .collect();
    assert!(missed.is_empty(), "undetected: {missed:?}");
}

#[test]
fn mutated_tsv_fails_checksum() {
    let text = tables::TABLES_TSV.replacen("\t52\t", "\t53\t", 1);
    assert!(tables::verify_checksum("tables.tsv", text.as_bytes(), tables::TABLES_SHA256).is_err());
}

/// Second route to `H·c₂`: `c₂(X)·H` read off the cover model, where
/// `c₂(X) = φ*c₂(Y) + R²`.
#[test]
fn hc2_from_cover_model_matches_formula() {
    for r in &shipped().rows {
        let y = QuotientData::new(q(r.h3, 2), r.s, r.n).unwrap().space_model();
        let dia = CoverDiagram::over_quotient(y, r.n, r.s).unwrap();
        let h = dia.x.generator("H").unwrap();
        assert_eq!(dia.x.c2_dot(&h).unwrap(), qi(r.hc2), "{}", r.label());
        assert_eq!(dia.x.triple_product(&h, &h, &h).unwrap(), qi(r.h3), "{}", r.label());
        assert_eq!(hc2_of_cover(r.s, r.n, &qi(r.h3)), qi(r.hc2), "{}", r.label());
    }
}

#[test]
fn quotient_degrees_double_to_h3() {
    for rec in &shipped().quotients {
        assert_eq!(h3_of_cover(&rec.d).unwrap(), qi(rec.h3), "{}", rec.name);
    }
}
