use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qcross::codec::{CodeSpec, Decoded};
use qcross::constructions::{construct_21, construct_field, mixed_construction};
use qcross::Splitting;

fn all_errors(n: usize, mags: &[i64]) -> Vec<(usize, i64)> {
    (0..n).flat_map(|i| mags.iter().map(move |&m| (i, m))).collect()
}

#[test]
fn two_one_code_sampled() {
    let code = CodeSpec::new(construct_21(2).unwrap(), 16).unwrap();
    assert_eq!(code.table().len(), 15);
    assert_eq!(code.pivots(), &[0]);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let info: Vec<u64> = (0..4).map(|_| rng.gen_range(0..16)).collect();
        let c = code.encode(&info, &[0]).unwrap();
        assert!(code.syndrome(&c).unwrap().is_zero());
        assert_eq!(code.decode(&c).unwrap(), Decoded::NoError { codeword: c.clone() });
        for (i, m) in all_errors(5, &[-1, 1, 2]) {
            let mut y = c.clone();
            y[i] += m;
            assert_eq!(code.decode(&y).unwrap(), Decoded::Corrected { codeword: c.clone(), index: i, magnitude: m });
        }
    }
}

#[test]
fn single_cell_code_exhaustive() {
    for levels in [4u64, 8, 16] {
        let code = CodeSpec::new(Splitting::cyclic(4, 2, 1, &[1]).unwrap(), levels).unwrap();
        let words: Vec<i64> = (0..levels / 4).map(|t| code.encode(&[], &[t]).unwrap()[0]).collect();
        assert_eq!(words, (0..levels as i64 / 4).map(|t| 4 * t).collect::<Vec<_>>());
        for &c in &words {
            for m in [-1, 1, 2] {
                assert_eq!(code.decode(&[c + m]).unwrap().codeword(), Some(&[c][..]));
            }
        }
    }
}

#[test]
fn decode_is_translation_invariant() {
    let code = CodeSpec::new(construct_21(2).unwrap(), 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let a = code.encode(&(0..4).map(|_| rng.gen_range(0..32)).collect::<Vec<_>>(), &[rng.gen_range(0..2)]).unwrap();
        let b = code.encode(&(0..4).map(|_| rng.gen_range(0..32)).collect::<Vec<_>>(), &[rng.gen_range(0..2)]).unwrap();
        let i = rng.gen_range(0..5);
        let m = [-1, 1, 2][rng.gen_range(0..3)];
        let mut y = a.clone();
        y[i] += m;
        let shifted: Vec<i64> = y.iter().zip(&b).map(|(x, z)| x + z).collect();
        let d0 = code.decode(&y).unwrap();
        let d1 = code.decode(&shifted).unwrap();
        let expect: Vec<i64> = d0.codeword().unwrap().iter().zip(&b).map(|(x, z)| x + z).collect();
        assert_eq!(d1.codeword(), Some(&expect[..]));
    }
}

#[test]
fn field_code_every_error() {
    let sp = construct_field(5, 2, 3, 1).unwrap();
    let code = CodeSpec::new(sp, 10).unwrap();
    assert_eq!(code.table().len(), 24);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let info: Vec<u64> = (0..code.info_len()).map(|_| rng.gen_range(0..10)).collect();
        let t: Vec<u64> = (0..2).map(|_| rng.gen_range(0..2)).collect();
        let c = code.encode(&info, &t).unwrap();
        assert!(code.syndrome(&c).unwrap().is_zero());
        for (i, m) in all_errors(6, &[-1, 1, 2, 3]) {
            let mut y = c.clone();
            y[i] += m;
            assert_eq!(code.decode(&y).unwrap().codeword(), Some(&c[..]));
        }
    }
}

#[test]
fn mixed_code_every_error() {
    let sp = mixed_construction(7, 1, 4, 2, 2).unwrap();
    let code = CodeSpec::new(sp, 7).unwrap();
    assert_eq!(code.table().len(), 48);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..50 {
        let info: Vec<u64> = (0..code.info_len()).map(|_| rng.gen_range(0..7)).collect();
        let c = code.encode(&info, &[0, 0]).unwrap();
        for (i, m) in all_errors(8, &[-2, -1, 1, 2, 3, 4]) {
            let mut y = c.clone();
            y[i] += m;
            assert_eq!(code.decode(&y).unwrap().codeword(), Some(&c[..]));
        }
    }
}

#[test]
fn packing_code_reports_uncorrectable() {
    let code = CodeSpec::new(Splitting::cyclic(17, 3, 2, &[1, 13]).unwrap(), 17).unwrap();
    assert_eq!(code.table().len(), 10);
    let uncorrectable = (0..17)
        .filter(|&a| matches!(code.decode(&[a, 0]).unwrap(), Decoded::Uncorrectable { .. }))
        .count();
    assert_eq!(uncorrectable, 17 - 1 - 10);
}
