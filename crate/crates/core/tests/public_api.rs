use psl_core::harness::{append_record, read_records, run_experiment, verify_entries};
use psl_core::*;

#[test]
fn decode_flip_and_search_round_trip() {
    let barker = decode_hex("1f35", 13).unwrap();
    assert_eq!(psl(&barker), 1);

    let mut state = SidelobeState::new(barker.clone());
    state.flip(6).unwrap();
    state.flip(6).unwrap();
    assert_eq!(state.sequence(), barker);

    let config = SearchConfig::new(13, 100, FitnessSpec::new(2).unwrap(), 1).with_initial(barker);
    let outcome = shc_run(&config).unwrap();
    assert_eq!(outcome.best_by_psl.value, 1);
    assert_eq!(psl(&outcome.best_by_psl.sequence), 1);
}

#[test]
fn records_persist_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("runs.jsonl");
    let config = ExperimentConfig::new(24, FitnessSpec::new(3).unwrap(), 3, 500, 77).with_threads(2);
    let first = run_experiment(&config).unwrap();
    append_record(&path, &first).unwrap();
    append_record(&path, &run_experiment(&config).unwrap()).unwrap();

    let records = read_records(&path).unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(records[0].without_timing(), records[1].without_timing());
    assert_eq!(records[0].rng_id, search::RNG_ID);
    assert_eq!(psl(&records[0].best_sequence().unwrap()), records[0].best_psl);
}

#[test]
fn rotation_of_generated_sequences() {
    let m = mseq(&LfsrSpec::from_exponents(&[5, 2, 0], 1).unwrap()).unwrap();
    let scan = scan_rotations(&m);
    assert_eq!(scan.psl_per_rotation.len(), 31);
    assert_eq!(psl(&rotate_left(&m, scan.rho_max)), scan.min_psl);

    let l = legendre(13).unwrap();
    assert_eq!(scan_rotations(&l).psl_per_rotation[0], psl(&l));
}

#[test]
fn verification_reports_corruption() {
    let entries = vec![
        KnownOptimalEntry::new(11, "712", 1),
        KnownOptimalEntry::new(11, "713", 1),
        KnownOptimalEntry::new(11, "z", 1),
    ];
    let report = verify_entries(&entries);
    assert!(!report.all_passed());
    assert_eq!(report.mismatches().count(), 2);
}
