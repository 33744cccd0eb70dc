//! Invariants of the tabulated PD codes must reproduce the tabulated
//! fingerprints, which were transcribed independently from KnotInfo.

use petalknot::invariants::{fingerprint, Fingerprint, FingerprintJson};
use petalknot::PlanarDiagram;
use serde_json::Value;

fn records() -> Vec<Value> {
    serde_json::from_str(include_str!("../data/knot_table.json")).unwrap()
}

#[test]
fn tabulated_pd_codes_match_tabulated_fingerprints() {
    let mut checked = 0;
    for r in records() {
        let Some(pd) = r.get("pd").filter(|v| !v.is_null()) else { continue };
        let crossings: Vec<[u32; 4]> = serde_json::from_value(pd.clone()).unwrap();
        let pd = PlanarDiagram::new(crossings, vec![]).unwrap();
        let want: FingerprintJson = serde_json::from_value(r["fingerprint"].clone()).unwrap();
        let got = fingerprint(&pd).unwrap();
        let want = Fingerprint::from_json(&want);
        assert!(got == want || got == want.mirror(), "{}: got {:?}", r["name"], got);
        checked += 1;
    }
    assert!(checked >= 36);
}
