use proptest::prelude::*;

use zerofact::error::Error;
use zerofact::survey::{
    data, dual_responder_before_table, ingest, marginal_consistency, paired_t_test, percentages,
    synthetic_pairing, LikertCategory, PairedResponses, StatementId, StatementTable,
};

fn pairs(max: usize) -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec((1u8..=5, 1u8..=5), 3..max)
}

// After-values at most one below before-values, so the mean difference is rarely positive.
fn leaning_up_pairs(max: usize) -> impl Strategy<Value = Vec<(u8, u8)>> {
    prop::collection::vec(
        (1u8..=5).prop_flat_map(|b| (Just(b), b.saturating_sub(1).max(1)..=5)),
        3..max,
    )
}

#[test]
fn likert_codes_are_a_bijection() {
    let codes: Vec<u8> = LikertCategory::ALL.iter().map(|c| c.code()).collect();
    assert_eq!(codes, vec![5, 4, 3, 2, 1]);
    for c in LikertCategory::ALL {
        assert_eq!(LikertCategory::from_code(c.code()), Some(c));
        assert_eq!(c.name().parse::<LikertCategory>(), Ok(c));
    }
    assert_eq!(LikertCategory::from_code(0), None);
    assert_eq!(LikertCategory::from_code(6), None);
}

#[test]
fn synthetic_pairing_respects_table_four() {
    for seed in [0, 1, 42, 9_999] {
        let p = synthetic_pairing(seed);
        assert_eq!(p.len(), data::DUAL_RESPONDERS as usize);
        assert!(marginal_consistency(
            &p,
            &data::statement(StatementId::S0),
            &data::statement(StatementId::S4)
        ));
        let (before, _) = p.marginals();
        assert_eq!(before, dual_responder_before_table().counts);
    }
    assert_eq!(synthetic_pairing(7), synthetic_pairing(7));
}

#[test]
fn recoding_one_response_breaks_consistency() {
    let p = synthetic_pairing(42);
    let mut recoded = p.pairs().to_vec();
    recoded[0].1 = if recoded[0].1 == 5 { 4 } else { 5 };
    let recoded = PairedResponses::new(recoded).unwrap();
    let pre = data::statement(StatementId::S0);
    let post = data::statement(StatementId::S4);
    assert!(!marginal_consistency(&recoded, &pre, &post));
    let empty = PairedResponses::new(Vec::new()).unwrap();
    assert!(!marginal_consistency(&empty, &pre, &post));
}

#[test]
fn codes_outside_scale_are_rejected() {
    assert!(PairedResponses::new(vec![(0, 3)]).is_err());
    assert!(PairedResponses::new(vec![(3, 6)]).is_err());
    assert!(PairedResponses::from_columns(&[1, 2], &[3]).is_err());
}

#[test]
fn raising_a_low_outlier_can_raise_p() {
    // d = (-1, -1, -1, -1, -3) -> (-1, -1, -1, -1, -4): the mean falls but the
    // spread grows faster, so t moves from -3.5 towards zero.
    let base = PairedResponses::from_columns(&[3, 3, 3, 3, 1], &[4, 4, 4, 4, 4]).unwrap();
    let raised = PairedResponses::from_columns(&[3, 3, 3, 3, 1], &[4, 4, 4, 4, 5]).unwrap();
    let base = paired_t_test(&base).unwrap();
    let raised = paired_t_test(&raised).unwrap();
    assert!((base.t_stat + 3.5).abs() < 1e-12);
    assert!(raised.t_stat > base.t_stat);
    assert!(raised.p_value > base.p_value);
}

#[test]
fn empty_table_has_no_percentages() {
    let t = StatementTable::new(StatementId::S1a, [0; 5]);
    assert_eq!(percentages(&t), Err(Error::EmptyTable));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    // Lowering d_i = before_i - after_i by one changes the sum of squares by
    // -2(d_i - mean) + 1 - 1/n, so it cannot grow when d_i sits at least
    // (1 - 1/n)/2 above the mean; with a non-positive mean, t can then only fall.
    #[test]
    fn raising_an_after_value_never_raises_p(data in leaning_up_pairs(30)) {
        let n = data.len() as f64;
        let d: Vec<f64> = data.iter().map(|&(b, a)| b as f64 - a as f64).collect();
        let mean = d.iter().sum::<f64>() / n;
        let i = (0..data.len())
            .filter(|&i| data[i].1 < 5)
            .max_by(|&x, &y| d[x].total_cmp(&d[y]));
        prop_assume!(i.is_some());
        let i = i.unwrap();
        prop_assume!(mean <= 0.0 && d[i] - mean >= 0.5 * (1.0 - 1.0 / n));
        let mut raised = data.clone();
        raised[i].1 += 1;
        let base = paired_t_test(&PairedResponses::new(data).unwrap());
        let up = paired_t_test(&PairedResponses::new(raised).unwrap());
        if let (Ok(base), Ok(up)) = (base, up) {
            prop_assert!(up.p_value <= base.p_value + 1e-12, "{} -> {}", base.p_value, up.p_value);
        }
    }

    #[test]
    fn shifting_every_after_value_never_raises_p(data in prop::collection::vec((1u8..=5, 1u8..=4), 3..30)) {
        let raised: Vec<(u8, u8)> = data.iter().map(|&(b, a)| (b, a + 1)).collect();
        let base = paired_t_test(&PairedResponses::new(data).unwrap());
        let up = paired_t_test(&PairedResponses::new(raised).unwrap());
        if let (Ok(base), Ok(up)) = (base, up) {
            prop_assert!(up.p_value <= base.p_value && up.t_stat < base.t_stat);
        }
    }

    #[test]
    fn p_value_is_a_probability(data in pairs(40)) {
        if let Ok(r) = paired_t_test(&PairedResponses::new(data).unwrap()) {
            prop_assert!((0.0..=1.0).contains(&r.p_value));
            prop_assert_eq!(r.df, r.n - 1);
        }
    }

    #[test]
    fn table_csv_round_trips(counts in prop::array::uniform5(0u32..200)) {
        prop_assume!(counts.iter().sum::<u32>() > 0);
        let t = StatementTable::new(StatementId::S2b, counts);
        let text = ingest::write_tables(std::slice::from_ref(&t));
        prop_assert_eq!(ingest::read_tables(text.as_bytes()).unwrap(), vec![t]);
    }

    #[test]
    fn rounded_percentages_stay_near_hundred(counts in prop::array::uniform5(0u32..500)) {
        prop_assume!(counts.iter().sum::<u32>() > 0);
        let p = percentages(&StatementTable::new(StatementId::S0, counts)).unwrap();
        let sum: f64 = p.rounded.iter().sum();
        prop_assert!((sum - 100.0).abs() <= 0.025 + 1e-9);
        let raw: f64 = p.unrounded.iter().sum();
        prop_assert!((raw - 100.0).abs() <= 1e-9);
    }
}
