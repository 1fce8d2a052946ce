mod common;

use std::fs;
use std::path::Path;

use bredon::bredon::{assemble_cochain, bredon_cohomology, Mode};
use bredon::character::{induction_matrix, restriction_matrix};
use bredon::commands::{cmd_compute, cmd_matrix, cmd_snf, cmd_verify, Direction, MatrixTarget, RunReport};
use bredon::dataset::Dataset;
use bredon::group::verify_stabilizer_inclusion;
use bredon::linalg::{FinAbGroup, IntMatrix};
use bredon::Error;
use common::*;
use num_bigint::BigInt;

const UNTWISTED: &str = "sl3z_untwisted.toml";
const COVER: &str = "sl3z_u1_cover.toml";
const ISOTYPIC: &str = "sl3z_u1_isotypic.toml";

fn restriction(file: &str, id: &str) -> IntMatrix {
    cmd_matrix(data(file), &MatrixTarget::Embedding(id.into()), None, false).unwrap()
}

fn grid(rows: &[&[i64]]) -> IntMatrix {
    IntMatrix::from_i64_rows(rows[0].len(), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

/// `sum m_j label_j` for one row of a restriction matrix.
fn combination(m: &IntMatrix, row: usize, labels: &[String]) -> String {
    (0..m.cols())
        .filter(|&j| m.get(row, j) != &BigInt::from(0))
        .map(|j| match m.get(row, j).to_string().as_str() {
            "1" => labels[j].clone(),
            k => format!("{k}*{}", labels[j]),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[test]
fn stabilizer_orders_match_the_cell_table() {
    let ds = Dataset::load(data(COVER)).unwrap();
    let expected = [
        ("v1", 24), ("v2", 12), ("v3", 24), ("v4", 8), ("v5", 24),
        ("e1", 4), ("e2", 6), ("e3", 6), ("e4", 2), ("e5", 2), ("e6", 4), ("e7", 8), ("e8", 8),
        ("t1", 2), ("t2", 1), ("t3", 4), ("t4", 2), ("t5", 2), ("T1", 1),
    ];
    assert_eq!(ds.complex.cells.len(), expected.len());
    for (cell, (name, order)) in ds.complex.cells.iter().zip(expected) {
        assert_eq!(cell.name, name);
        assert_eq!(cell.stabilizer.order(), order, "{name}");
    }
    for inc in &ds.complex.incidences {
        let (c, f) = (&ds.complex.cells[inc.cell], &ds.complex.cells[inc.face]);
        assert!(verify_stabilizer_inclusion(&c.stabilizer, &f.stabilizer, &inc.conjugator), "{}", inc.id);
    }
    assert_eq!(ds.complex.incidences.len(), 41);
}

#[test]
fn covers_have_the_expected_shape() {
    let ds = Dataset::load(data(COVER)).unwrap();
    for (name, order) in [("S4*", 48), ("D6*", 24), ("D2*", 8)] {
        let ext = &ds.extensions[name];
        assert_eq!(ext.total().order(), order);
        assert_eq!(ext.n(), 2);
    }
    // D2* is the quaternion group: a single involution.
    let q8 = ds.extensions["D2*"].total();
    assert_eq!(q8.element_orders().iter().filter(|&&o| o == 2).count(), 1);
}

#[test]
fn cover_restriction_matrices_match_the_printed_ones() {
    let e1v1 = grid(&[
        &[1, 0, 0, 0, 0], &[0, 0, 0, 1, 0], &[1, 0, 0, 1, 0], &[1, 1, 1, 0, 0],
        &[0, 1, 1, 1, 0], &[0, 0, 0, 0, 1], &[0, 0, 0, 0, 1], &[0, 0, 0, 0, 2],
    ]);
    let e1v2 = grid(&[
        &[1, 0, 0, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 1, 0, 0], &[0, 1, 0, 0, 0], &[0, 1, 1, 0, 0],
        &[1, 0, 0, 1, 0], &[0, 0, 0, 0, 1], &[0, 0, 0, 0, 1], &[0, 0, 0, 0, 1],
    ]);
    let d3 = grid(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 0, 1], &[0, 1, 1], &[0, 0, 1], &[0, 0, 1], &[1, 1, 1]]);
    let e4 = grid(&[&[1, 0], &[0, 1], &[0, 1], &[1, 0], &[1, 1], &[1, 1], &[1, 1], &[1, 1], &[1, 1]]);
    let e5 = grid(&[&[1, 0], &[0, 1], &[1, 0], &[0, 1], &[1, 1], &[1, 1], &[1, 1], &[1, 1], &[1, 1]]);
    assert_eq!(restriction(COVER, "e1->v1"), e1v1);
    assert_eq!(restriction(COVER, "e1->v2"), e1v2);
    assert_eq!(restriction(COVER, "e2->v1"), d3);
    assert_eq!(restriction(COVER, "e3->v1"), d3);
    assert_eq!(restriction(COVER, "e4->v2"), e4);
    assert_eq!(restriction(COVER, "e5->v2"), e5);
}

#[test]
fn decomposition_identities() {
    let ds = Dataset::load(data(COVER)).unwrap();
    let labels = |t: &str| ds.tables[t].table.labels.clone();
    let m = restriction(COVER, "e1->v1");
    let expected = [
        "eta1", "eta4", "eta1 + eta4", "eta1 + eta2 + eta3", "eta2 + eta3 + eta4", "eta5", "eta5", "2*eta5",
    ];
    for (i, e) in expected.iter().enumerate() {
        assert_eq!(combination(&m, i, &labels("R(e1)*")), *e, "epsilon{}", i + 1);
    }
    let m = restriction(COVER, "e1->v2");
    let expected = [
        "eta1", "eta4", "eta3", "eta2", "eta2 + eta3", "eta1 + eta4", "eta5", "eta5", "eta5",
    ];
    for (i, e) in expected.iter().enumerate() {
        assert_eq!(combination(&m, i, &labels("R(e1)*")), *e, "gamma{}", i + 1);
    }
    for id in ["e2->v1", "e3->v1"] {
        let m = restriction(COVER, id);
        let l = labels("R(e2)");
        assert_eq!(combination(&m, 5, &l), "lambda3");
        assert_eq!(combination(&m, 6, &l), "lambda3");
        assert_eq!(combination(&m, 7, &l), "lambda1 + lambda2 + lambda3");
    }
    for id in ["e4->v2", "e5->v2"] {
        let m = restriction(COVER, id);
        for row in 6..9 {
            assert_eq!(combination(&m, row, &labels("R(e4)")), "rho1 + rho2");
        }
    }
    // The twisted character of D2* restricts to the regular character of the 2-cells.
    for id in ["t1->e1", "t4->e1"] {
        let m = restriction(COVER, id);
        assert_eq!(combination(&m, 4, &labels("R(t1)")), "rho1 + rho2");
    }
}

#[test]
fn spin_character_values_along_e2() {
    let ds = Dataset::load(data(COVER)).unwrap();
    let (emb, big, small) = ds.restriction_data("e2->v1", Mode::CoverRing).unwrap();
    let fusion = emb.fusion_map().unwrap();
    let eps6 = big.table.character(5);
    let r = bredon::character::restrict(&eps6, &big.table, &small.table, &fusion).unwrap();
    let values: Vec<String> = r.values.iter().map(ToString::to_string).collect();
    // Columns of the D3 table are 1, b = g10, a = g6*g10.
    assert_eq!(values, ["2", "0", "-1"]);
    let eps8 = big.table.character(7);
    let r = bredon::character::restrict(&eps8, &big.table, &small.table, &fusion).unwrap();
    assert_eq!(r.values.iter().map(ToString::to_string).collect::<Vec<_>>(), ["4", "0", "1"]);
}

#[test]
fn cohomology_in_every_mode() {
    let cases = [
        (UNTWISTED, Mode::Untwisted, vec![26, 28, 11, 1], vec![18, 10, 1], 8),
        (COVER, Mode::CoverRing, vec![32, 29, 11, 1], vec![19, 10, 1], 13),
        (ISOTYPIC, Mode::Isotypic, vec![21, 25, 11, 1], vec![15, 10, 1], 6),
    ];
    for (file, mode, ranks, diff_ranks, h0) in cases {
        let r = cmd_compute(data(file), None, Direction::Both).unwrap();
        assert_eq!(r.mode, mode);
        let cohom = r.cohomology.as_ref().unwrap();
        let hom = r.homology.as_ref().unwrap();
        assert_eq!(cohom.chain_ranks, ranks);
        assert_eq!(cohom.differentials.iter().map(|d| d.rank).collect::<Vec<_>>(), diff_ranks);
        assert!(cohom.differentials.iter().all(|d| d.divisors.iter().all(|x| x == "1")));
        let expected = [FinAbGroup::free(h0), FinAbGroup::zero(), FinAbGroup::zero(), FinAbGroup::zero()];
        assert_eq!(cohom.groups, expected, "{file}");
        assert_eq!(hom.groups, expected, "{file}");
        assert!(r.uct.pass);
        let ahss = r.ahss.as_ref().unwrap();
        assert!(ahss.collapses);
        assert_eq!(ahss.k0, Some(FinAbGroup::free(h0)));
        assert_eq!(ahss.k1, Some(FinAbGroup::zero()));
        let duality = r.duality.as_ref().unwrap();
        assert!(duality.hypotheses_satisfied);
        assert_eq!(duality.k_even, Some(FinAbGroup::free(h0)));
        assert_eq!(duality.k_odd, Some(FinAbGroup::zero()));
    }
}

#[test]
fn differential_ranks_agree_with_rational_elimination() {
    for file in [UNTWISTED, COVER, ISOTYPIC] {
        let ds = Dataset::load(data(file)).unwrap();
        let b = assemble_cochain(&ds.complex, &ds.coefficients(ds.mode).unwrap()).unwrap();
        let r = bredon_cohomology(&b, "").unwrap();
        for (m, s) in b.differentials.iter().zip(&r.differentials) {
            assert_eq!(rational_rank(m), s.rank, "{file} {}", s.name);
        }
        let euler: i64 = b.ranks().iter().enumerate().map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
        assert_eq!(euler, r.groups[0].free_rank() as i64);
    }
}

#[test]
fn twisted_basis_size_is_the_number_of_regular_classes() {
    let ds = Dataset::load(data(COVER)).unwrap();
    let twist = &ds.twists["u1"];
    for (cell, expected) in [("e1", 1), ("v1", 3), ("v2", 3)] {
        let t = &twist[cell];
        let ext = &t.extension;
        let base = ext.base();
        // A class is regular when the cocycle is symmetric on its centralizer.
        let brute = base
            .classes()
            .iter()
            .filter(|c| {
                let h = c.representative;
                base.centralizer(h).iter().all(|&x| ext.cocycle(h, x) == ext.cocycle(x, h))
            })
            .count();
        assert_eq!(brute, expected, "{cell}");
        assert_eq!(t.alpha_regular_classes().len(), expected, "{cell}");
        assert_eq!(t.twisted_rows().len(), expected, "{cell}");
    }
}

#[test]
fn induction_is_the_transpose_of_restriction() {
    for file in [UNTWISTED, COVER, ISOTYPIC] {
        let ds = Dataset::load(data(file)).unwrap();
        for mode in ds.available_modes() {
            for inc in &ds.complex.incidences {
                let (emb, big, small) = ds.restriction_data(&inc.id, mode).unwrap();
                let res = restriction_matrix(&big, &small, &emb).unwrap();
                let ind = induction_matrix(&big, &small, &emb).unwrap();
                assert_eq!(ind, res.transpose(), "{file} {mode} {}", inc.id);
            }
        }
    }
}

#[test]
fn standalone_embeddings() {
    assert_eq!(restriction(UNTWISTED, "id_v1"), IntMatrix::identity(5));
    let m = restriction(UNTWISTED, "e2_in_v1");
    assert_eq!((m.rows(), m.cols()), (5, 3));
    let ind = cmd_matrix(data(UNTWISTED), &MatrixTarget::Induction("e2_in_v1".into()), None, false).unwrap();
    assert_eq!(ind, m.transpose());
    let t = cmd_matrix(data(UNTWISTED), &MatrixTarget::Embedding("e2_in_v1".into()), None, true).unwrap();
    assert_eq!(t, ind);
}

#[test]
fn exported_differential_reimports_with_rank_19() {
    let dir = tempfile::tempdir().unwrap();
    let phi1 = cmd_matrix(data(COVER), &MatrixTarget::Differential(1), None, false).unwrap();
    assert_eq!((phi1.rows(), phi1.cols()), (29, 32));
    let path = dir.path().join("phi1.txt");
    fs::write(&path, phi1.to_string()).unwrap();
    let r = cmd_snf(&path).unwrap();
    assert_eq!(r.rank, 19);
    assert!(r.divisors.iter().all(|d| d == "1"));
    assert!(matches!(
        cmd_matrix(data(COVER), &MatrixTarget::Differential(4), None, false),
        Err(Error::Validation { .. })
    ));
}

#[test]
fn snf_of_small_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a.txt");
    fs::write(&p, "# two by two\n2 2\n2 4\n6 8\n").unwrap();
    let r = cmd_snf(&p).unwrap();
    assert_eq!((r.rank, r.divisors.clone()), (2, vec!["2".to_string(), "4".to_string()]));
    fs::write(&p, IntMatrix::identity(4).to_string()).unwrap();
    assert_eq!(cmd_snf(&p).unwrap().divisors, vec!["1"; 4]);
    fs::write(&p, "2 2\n1 2 3\n").unwrap();
    assert_eq!(cmd_snf(&p).unwrap_err().exit_code(), 1);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let a = cmd_compute(data(COVER), None, Direction::Both).unwrap();
    let b = cmd_compute(data(COVER), None, Direction::Both).unwrap();
    assert_eq!(a.to_machine(), b.to_machine());
    assert_eq!(RunReport::from_machine(&a.to_machine()).unwrap(), a);
    let text = a.to_text(None);
    assert!(text.contains("H^0 = Z^13"));
    assert!(text.contains("Phi1: 29x32, rank 19, divisors 1^19"));
}

/// Copies the bundled data into a scratch directory and edits one file.
fn mutated(file: &str, edit: impl Fn(String) -> String) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(data("")).unwrap() {
        let p = entry.unwrap().path();
        fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    let target = dir.path().join(file);
    let text = fs::read_to_string(&target).unwrap();
    let changed = edit(text.clone());
    assert_ne!(changed, text, "edit did not apply");
    fs::write(&target, changed).unwrap();
    dir
}

fn verify_in(dir: &Path, file: &str) -> Result<(), Error> {
    cmd_verify(dir.join(file)).map(|_| ())
}

#[test]
fn bundled_datasets_verify() {
    for file in [UNTWISTED, COVER, ISOTYPIC] {
        let r = cmd_verify(data(file)).unwrap();
        assert_eq!(r.fingerprint.len(), 64);
    }
}

#[test]
fn flipped_boundary_sign_is_caught_by_the_square_zero_check() {
    let dir = mutated("sl3z_common.toml", |t| {
        t.replacen("cell = \"t3\"\nface = \"e8\"\nsign = 1", "cell = \"t3\"\nface = \"e8\"\nsign = -1", 1)
    });
    let err = verify_in(dir.path(), UNTWISTED).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    let msg = err.to_string();
    assert!(msg.contains("composite of differentials"), "{msg}");
    assert!(msg.contains("T1") || msg.contains("v"), "{msg}");
}

#[test]
fn corrupted_character_value_fails_orthogonality() {
    let dir = mutated("sl3z_common.toml", |t| {
        t.replacen("label = \"theta4\", values = [\"3\", \"1\"", "label = \"theta4\", values = [\"3\", \"2\"", 1)
    });
    let err = verify_in(dir.path(), UNTWISTED).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("chartable S4"), "{err}");
}

#[test]
fn wrong_conjugator_is_rejected() {
    let dir = mutated("sl3z_common.toml", |t| {
        t.replacen("face = \"v4\"\nsign = 1\nconjugator = \"q1^-1\"", "face = \"v4\"\nsign = 1", 1)
    });
    let err = verify_in(dir.path(), UNTWISTED).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert!(err.to_string().contains("boundary e5->v4"), "{err}");
}

#[test]
fn wrong_group_order_is_rejected() {
    let dir = mutated("sl3z_common.toml", |t| {
        t.replacen("name = \"stab_v2\"\ngenerators = [\"g4\", \"g5\"]\norder = 12", "name = \"stab_v2\"\ngenerators = [\"g4\", \"g5\"]\norder = 6", 1)
    });
    let err = verify_in(dir.path(), UNTWISTED).unwrap_err();
    assert!(err.to_string().contains("group stab_v2"), "{err}");
}

#[test]
fn include_cycles_and_syntax_errors_are_parse_errors() {
    let dir = mutated("sl3z_common.toml", |t| format!("include = [\"sl3z_untwisted.toml\"]\n{t}"));
    assert_eq!(verify_in(dir.path(), UNTWISTED).unwrap_err().exit_code(), 1);
    let dir = mutated("sl3z_common.toml", |t| t.replacen("[[matrix]]", "[[matrix]", 1));
    assert_eq!(verify_in(dir.path(), UNTWISTED).unwrap_err().exit_code(), 1);
    assert_eq!(cmd_verify(data("missing.toml")).unwrap_err().exit_code(), 1);
}

#[test]
fn twisted_mode_needs_a_twist() {
    let err = cmd_compute(data(UNTWISTED), Some(Mode::CoverRing), Direction::Cohomology).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}
