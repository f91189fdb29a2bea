/*
Copyright 2026 The slrcov Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use slrcov::metrics::{fpr_tpr, frobenius_error, sparsity};
use slrcov::SymMatrix;

fn sign_pattern(rng: &mut Xoshiro256PlusPlus, p: usize) -> SymMatrix {
    let mut data = vec![0.0; p * p];
    for i in 0..p {
        for j in i..p {
            let v = [-1.0, 0.0, 1.0][rng.random_range(0..3)];
            data[i * p + j] = v;
            data[j * p + i] = v;
        }
    }
    SymMatrix::from_row_major(p, data).unwrap()
}

#[test]
fn rates_match_a_brute_force_count() {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(5);
    for _ in 0..10_000 {
        let truth = sign_pattern(&mut rng, 5);
        let est = sign_pattern(&mut rng, 5);
        let rates = fpr_tpr(&truth, &est, 0.0).unwrap();
        assert_eq!(
            (rates.fpr, rates.tpr),
            common::brute_force_rates(&truth, &est)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sparsity_counts_whole_entries(p in 1..=10usize, seed in any::<u64>()) {
        let m = sign_pattern(&mut Xoshiro256PlusPlus::seed_from_u64(seed), p);
        let count = sparsity(&m, 0.0) * (p * p) as f64;
        prop_assert!((count - count.round()).abs() <= 1e-9);
    }

    #[test]
    fn frobenius_error_obeys_the_triangle_inequality(p in 1..=8usize, seed in any::<u64>()) {
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
        let a = common::random_symmetric(&mut rng, p, 1.0);
        let b = common::random_symmetric(&mut rng, p, 1.0);
        let c = common::random_symmetric(&mut rng, p, 1.0);
        let ac = frobenius_error(&a, &c).unwrap();
        prop_assert!(ac <= frobenius_error(&a, &b).unwrap() + frobenius_error(&b, &c).unwrap() + 1e-12);
    }
}
