//! Knot lookup table, enumeration of difference classes, classification
//! of small petal numbers and the bridge-number lower bound.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{fingerprint, Fingerprint, FingerprintJson, CROSSING_BUDGET};
use crate::petalperm::PetalPermutation;
use crate::simplify::{diagram_pd, petal_reduced_diagram};
use crate::uberdiag::UbercrossingDiagram;

/// Environment variable naming a table file to use instead of the bundled one.
pub const TABLE_ENV: &str = "PETALKNOT_TABLE";

const BUNDLED_TABLE: &str = include_str!("../data/knot_table.json");

/// Largest petal number handled by enumeration and classification.
pub const MAX_P: usize = 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotRecord {
    pub name: String,
    pub crossing_number: u32,
    pub bridge_number: u32,
    pub unknotting_number: Option<u32>,
    pub chiral: bool,
    /// Fingerprint of the tabulated chirality.
    pub fingerprint: Fingerprint,
    pub provenance: String,
    pub pd: Option<Vec<[u32; 4]>>,
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    name: String,
    crossing_number: u32,
    bridge_number: u32,
    unknotting_number: Option<u32>,
    chiral: bool,
    fingerprint: FingerprintJson,
    #[serde(default)]
    provenance: String,
    #[serde(default)]
    pd: Option<Vec<[u32; 4]>>,
}

impl From<RecordJson> for KnotRecord {
    fn from(r: RecordJson) -> Self {
        KnotRecord {
            name: r.name,
            crossing_number: r.crossing_number,
            bridge_number: r.bridge_number,
            unknotting_number: r.unknotting_number,
            chiral: r.chiral,
            fingerprint: Fingerprint::from_json(&r.fingerprint),
            provenance: r.provenance,
            pd: r.pd,
        }
    }
}

impl KnotRecord {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(RecordJson {
            name: self.name.clone(),
            crossing_number: self.crossing_number,
            bridge_number: self.bridge_number,
            unknotting_number: self.unknotting_number,
            chiral: self.chiral,
            fingerprint: self.fingerprint.to_json(),
            provenance: self.provenance.clone(),
            pd: self.pd.clone(),
        })
        .expect("records serialize")
    }
}

/// A table match, possibly of the mirror image of the tabulated knot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identification<'a> {
    pub record: &'a KnotRecord,
    pub mirrored: bool,
}

impl Identification<'_> {
    /// Record name, prefixed with `m` for the mirror of a chiral knot.
    pub fn name(&self) -> String {
        match (self.mirrored, self.record.name.contains('#')) {
            (false, _) => self.record.name.clone(),
            (true, false) => format!("m{}", self.record.name),
            (true, true) => format!("m({})", self.record.name),
        }
    }
}

#[derive(Clone, Debug)]
pub struct KnotTable {
    records: Vec<KnotRecord>,
    index: HashMap<Fingerprint, (usize, bool)>,
}

impl KnotTable {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Vec<RecordJson> = serde_json::from_str(text)?;
        let records: Vec<KnotRecord> = raw.into_iter().map(KnotRecord::from).collect();
        let mut index: HashMap<Fingerprint, (usize, bool)> = HashMap::new();
        for (i, r) in records.iter().enumerate() {
            let mut keys = vec![(r.fingerprint.clone(), false)];
            let m = r.fingerprint.mirror();
            if m != r.fingerprint {
                keys.push((m, true));
            }
            for (f, mirrored) in keys {
                if let Some(&(j, _)) = index.get(&f) {
                    return Err(Error::Parse(format!(
                        "records {} and {} share a fingerprint",
                        records[j].name, r.name
                    )));
                }
                index.insert(f, (i, mirrored));
            }
        }
        Ok(Self { records, index })
    }

    pub fn bundled() -> Self {
        Self::from_json(BUNDLED_TABLE).expect("bundled table is valid")
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// The table named by `PETALKNOT_TABLE`, or the bundled one.
    pub fn load() -> Result<Self> {
        match std::env::var_os(TABLE_ENV) {
            Some(path) if !path.is_empty() => Self::from_path(&PathBuf::from(path)),
            _ => Ok(Self::bundled()),
        }
    }

    pub fn records(&self) -> &[KnotRecord] {
        &self.records
    }

    pub fn get(&self, name: &str) -> Option<&KnotRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Exact lookup, trying the mirror image as well.
    pub fn identify(&self, f: &Fingerprint) -> Option<Identification<'_>> {
        self.index.get(f).map(|&(i, mirrored)| Identification { record: &self.records[i], mirrored })
    }
}

fn check_p(p: usize) -> Result<()> {
    if p < 3 || p % 2 == 0 || p > MAX_P {
        return Err(Error::Unsupported(format!("petal number {p} is outside the odd range 3..={MAX_P}")));
    }
    Ok(())
}

/// All permutations of `1..=p` starting with 1.
fn pinned_permutations(p: usize) -> Vec<Vec<u32>> {
    fn rec(cur: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Vec<u32>>) {
        if cur.len() == used.len() - 1 {
            out.push(cur.clone());
            return;
        }
        for h in 2..used.len() {
            if !used[h] {
                used[h] = true;
                cur.push(h as u32);
                rec(cur, used, out);
                cur.pop();
                used[h] = false;
            }
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; p + 1];
    used[1] = true;
    rec(&mut vec![1], &mut used, &mut out);
    out
}

/// One representative per difference class, sorted by canonical key.
pub fn enumerate_classes(p: usize) -> Result<Vec<PetalPermutation>> {
    check_p(p)?;
    let mut seen: BTreeMap<Vec<u32>, PetalPermutation> = BTreeMap::new();
    for v in pinned_permutations(p) {
        let class = PetalPermutation::new(v).expect("valid").canonical_class();
        seen.entry(class.canonical_rotation).or_insert(class.representative);
    }
    Ok(seen.into_values().collect())
}

/// Result of classifying one representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassResult {
    pub representative: PetalPermutation,
    pub fingerprint: Option<FingerprintJson>,
    pub crossings: usize,
    pub error: Option<String>,
}

fn classify_one(sigma: &PetalPermutation, budget: usize) -> ClassResult {
    let outcome = petal_reduced_diagram(sigma).and_then(|pd| {
        let reduced = pd.reduce_r1_r2().crossing_count();
        if reduced > budget {
            return Err(Error::BudgetExceeded { crossings: reduced, budget });
        }
        Ok((pd.crossing_count(), fingerprint(&pd)?))
    });
    match outcome {
        Ok((crossings, f)) => {
            ClassResult { representative: sigma.clone(), fingerprint: Some(f.to_json()), crossings, error: None }
        }
        Err(e) => ClassResult { representative: sigma.clone(), fingerprint: None, crossings: 0, error: Some(e.to_string()) },
    }
}

/// One knot type found at petal number `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassRow {
    /// `None` when the invariant computation was refused.
    pub fingerprint: Option<Fingerprint>,
    pub knot: Option<String>,
    pub class_count: usize,
    /// The representative with the smallest canonical key.
    pub example: PetalPermutation,
    pub flag: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationTable {
    pub p: usize,
    pub rows: Vec<ClassRow>,
    pub total_classes: usize,
}

impl ClassificationTable {
    fn from_results(p: usize, results: Vec<ClassResult>, table: &KnotTable) -> Self {
        let total_classes = results.len();
        let mut rows: Vec<ClassRow> = Vec::new();
        let mut at: HashMap<Option<Fingerprint>, usize> = HashMap::new();
        for r in results {
            let f = r.fingerprint.as_ref().map(Fingerprint::from_json);
            if r.error.is_some() {
                rows.push(ClassRow { fingerprint: None, knot: None, class_count: 1, example: r.representative, flag: r.error });
                continue;
            }
            match at.get(&f) {
                Some(&i) => rows[i].class_count += 1,
                None => {
                    at.insert(f.clone(), rows.len());
                    let knot = f.as_ref().and_then(|f| table.identify(f)).map(|id| id.name());
                    rows.push(ClassRow { fingerprint: f, knot, class_count: 1, example: r.representative, flag: None });
                }
            }
        }
        ClassificationTable { p, rows, total_classes }
    }

    /// Rows whose knot matches `name`, mirror prefix included.
    pub fn rows_named(&self, name: &str) -> Vec<&ClassRow> {
        self.rows.iter().filter(|r| r.knot.as_deref() == Some(name)).collect()
    }

    pub fn contains(&self, f: &Fingerprint) -> bool {
        self.rows.iter().any(|r| r.fingerprint.as_ref() == Some(f))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                serde_json::json!({
                    "knot": r.knot,
                    "class_count": r.class_count,
                    "example": r.example,
                    "fingerprint": r.fingerprint.as_ref().map(Fingerprint::to_json),
                    "flag": r.flag,
                })
            })
            .collect();
        serde_json::json!({ "p": self.p, "total_classes": self.total_classes, "rows": rows })
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["p", "knot", "class_count", "example", "determinant", "alexander", "jones", "flag"]).map_err(io)?;
        for r in &self.rows {
            let (det, alex, jones) = match &r.fingerprint {
                Some(f) => (f.determinant.to_string(), f.alexander.display_with("t", 1), f.jones.display_with("t", 2)),
                None => Default::default(),
            };
            w.write_record([
                self.p.to_string(),
                r.knot.clone().unwrap_or_default(),
                r.class_count.to_string(),
                r.example.to_string(),
                det,
                alex,
                jones,
                r.flag.clone().unwrap_or_default(),
            ])
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Classifies every difference class at petal number `p` by the
/// fingerprint of its reduced diagram. Classes whose reduced diagram
/// exceeds `budget` crossings are kept as flagged rows.
pub fn classify(p: usize, budget: usize, table: &KnotTable) -> Result<ClassificationTable> {
    let reps = enumerate_classes(p)?;
    let budget = budget.min(CROSSING_BUDGET);
    let results: Vec<ClassResult> = reps.par_iter().map(|s| classify_one(s, budget)).collect();
    Ok(ClassificationTable::from_results(p, results, table))
}

/// Like [`classify`], splitting the work into `shards` and keeping each
/// finished shard in `dir` so an interrupted run resumes where it stopped.
pub fn classify_checkpointed(
    p: usize,
    budget: usize,
    table: &KnotTable,
    dir: &Path,
    shards: usize,
) -> Result<ClassificationTable> {
    let reps = enumerate_classes(p)?;
    let budget = budget.min(CROSSING_BUDGET);
    let shards = shards.max(1);
    let size = reps.len().div_ceil(shards).max(1);
    std::fs::create_dir_all(dir)?;
    let mut results = Vec::with_capacity(reps.len());
    for (k, chunk) in reps.chunks(size).enumerate() {
        let path = checkpoint_path(dir, p, k);
        let done: Option<Vec<ClassResult>> = match std::fs::read_to_string(&path) {
            Ok(text) => serde_json::from_str(&text).ok(),
            Err(_) => None,
        };
        let shard = match done {
            Some(r) if r.iter().map(|c| &c.representative).eq(chunk.iter()) => r,
            _ => {
                let r: Vec<ClassResult> = chunk.par_iter().map(|s| classify_one(s, budget)).collect();
                let tmp = path.with_extension("tmp");
                std::fs::write(&tmp, serde_json::to_string(&r)?)?;
                std::fs::rename(&tmp, &path)?;
                r
            }
        };
        results.extend(shard);
    }
    Ok(ClassificationTable::from_results(p, results, table))
}

pub fn checkpoint_path(dir: &Path, p: usize, shard: usize) -> PathBuf {
    dir.join(format!("classify-p{p}-shard{shard}.json"))
}

/// Smallest odd `p <= p_max` at which some petal permutation has
/// fingerprint `f`.
pub fn min_petal_search(f: &Fingerprint, p_max: usize, table: &KnotTable) -> Result<Option<usize>> {
    check_p(p_max)?;
    for p in (3..=p_max).step_by(2) {
        if classify(p, CROSSING_BUDGET, table)?.contains(f) {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Checks `n >= 2b` for a diagram of the knot in `rec`.
pub fn check_bridge_bound(d: &UbercrossingDiagram, rec: &KnotRecord) -> Result<bool> {
    let f = fingerprint(&diagram_pd(d)?)?;
    if f != rec.fingerprint && f != rec.fingerprint.mirror() {
        return Err(Error::Verification(format!("diagram is not {}", rec.name)));
    }
    Ok(d.n() >= 2 * rec.bridge_number as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn perm(v: &[u32]) -> PetalPermutation {
        PetalPermutation::new(v.to_vec()).unwrap()
    }

    /// Orbits of the pinned permutations under rotating positions and
    /// renormalizing the first height to 1.
    fn orbit_count(p: usize) -> usize {
        let all = pinned_permutations(p);
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut orbits = 0;
        for v in all {
            if seen.contains(&v) {
                continue;
            }
            orbits += 1;
            let mut stack = vec![v];
            while let Some(w) = stack.pop() {
                if !seen.insert(w.clone()) {
                    continue;
                }
                let shift = w[1] - 1;
                let rotated: Vec<u32> = (0..p).map(|i| (w[(i + 1) % p] + p as u32 - 1 - shift) % p as u32 + 1).collect();
                stack.push(rotated);
            }
        }
        orbits
    }

    #[test]
    fn class_counts_match_orbit_counts() {
        // the two unknot diagrams are mirror images, which the relation keeps apart
        assert_eq!(enumerate_classes(3).unwrap(), vec![perm(&[1, 2, 3]), perm(&[1, 3, 2])]);
        for p in [5, 7] {
            assert_eq!(enumerate_classes(p).unwrap().len(), orbit_count(p));
        }
        assert!(enumerate_classes(11).is_err());
        assert!(enumerate_classes(4).is_err());
    }

    #[test]
    fn extremal_classes_are_singletons_in_the_enumeration() {
        let reps = enumerate_classes(5).unwrap();
        assert_eq!(reps.iter().filter(|s| s.is_extremal()).count(), 2);
    }

    #[test]
    fn bundled_table_identifies_unknot_and_trefoil() {
        let t = KnotTable::bundled();
        let id = t.identify(&Fingerprint::unknot()).unwrap();
        assert_eq!(id.name(), "0_1");
        let tre = t.get("3_1").unwrap().fingerprint.clone();
        assert_eq!(t.identify(&tre).unwrap().name(), "3_1");
        assert_eq!(t.identify(&tre.mirror()).unwrap().name(), "m3_1");
        let sq = t.get("3_1#m3_1").unwrap().fingerprint.clone();
        assert!(!t.identify(&sq).unwrap().mirrored);
        assert_eq!(t.identify(&t.get("3_1#3_1").unwrap().fingerprint.mirror()).unwrap().name(), "m(3_1#3_1)");
    }

    #[test]
    fn duplicate_fingerprints_are_rejected() {
        let t = KnotTable::bundled();
        let r = t.get("3_1").unwrap().to_json();
        let text = serde_json::to_string(&vec![r.clone(), r]).unwrap();
        assert!(KnotTable::from_json(&text).is_err());
    }

    #[test]
    fn classify_three_is_the_unknot() {
        let c = classify(3, CROSSING_BUDGET, &KnotTable::bundled()).unwrap();
        assert_eq!(c.rows.len(), 1);
        assert_eq!(c.rows[0].knot.as_deref(), Some("0_1"));
        assert_eq!(c.rows[0].class_count, 2);
    }

    #[test]
    fn tiny_budget_flags_rows() {
        let c = classify(5, 2, &KnotTable::bundled()).unwrap();
        assert!(c.rows.iter().any(|r| r.flag.is_some()));
        assert_eq!(c.rows.iter().map(|r| r.class_count).sum::<usize>(), c.total_classes);
    }

    #[test]
    fn checkpoints_resume() {
        let dir = tempfile::tempdir().unwrap();
        let t = KnotTable::bundled();
        let a = classify_checkpointed(5, CROSSING_BUDGET, &t, dir.path(), 3).unwrap();
        assert!(checkpoint_path(dir.path(), 5, 0).exists());
        let b = classify_checkpointed(5, CROSSING_BUDGET, &t, dir.path(), 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, classify(5, CROSSING_BUDGET, &t).unwrap());
    }

    #[test]
    fn csv_has_a_header_and_rows() {
        let c = classify(5, CROSSING_BUDGET, &KnotTable::bundled()).unwrap();
        let text = c.to_csv().unwrap();
        assert!(text.starts_with("p,knot,class_count,example"));
        assert_eq!(text.lines().count(), c.rows.len() + 1);
    }
}
