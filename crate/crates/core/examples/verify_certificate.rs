//! Budget checks, including budgets far beyond machine integers.
//!
//! cargo run --example verify_certificate

use ocp::{fixtures, verify_certificate, BigCost, OcpInstance};

fn main() {
    let b = fixtures::test_b();
    let best = b.covering(&["E4", "E3", "E2", "E1"]).unwrap();
    for budget in [292u64, 291] {
        let inst = b.with_budget(Some(BigCost::from(budget)));
        let v = verify_certificate(&inst, &best).unwrap();
        println!("testB, C = {budget}: {}", v.reason);
    }

    // C = 2^4000 + 2^17; a step of weight 5000 is refused on sight
    let inst = OcpInstance::builder()
        .label("heavy", 4000)
        .label("light", 17)
        .label("huge", 5000)
        .edge("H", ["heavy"])
        .edge("L", ["light"])
        .edge("X", ["huge", "light"])
        .edge("Y", ["huge"])
        .budget(Some(BigCost::from_exponents([4000, 17])))
        .build()
        .unwrap();
    for seq in [&["H", "L", "Y"][..], &["X", "H"], &["H", "L"]] {
        let v = verify_certificate(&inst, &inst.covering(seq).unwrap()).unwrap();
        match v.step {
            Some(s) => println!("{seq:?}: {} at step {}", v.reason, s + 1),
            None => println!("{seq:?}: {}", v.reason),
        }
    }
}
