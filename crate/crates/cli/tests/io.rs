//! Files on disk: hit tables, checkpoints, reference tables.

use std::fs;

use paradox::checkpoint::Checkpoint;
use paradox::hits::{read_hits, write_hits};
use paradox::shard::{run_search, SearchConfig};
use paradox::tables::{References, DELAY_FILE, EXCURSION_FILE};
use paradox_core::records::RecordKind;
use paradox_core::Formalism;

#[test]
fn hit_tables_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let hits = run_search(&SearchConfig::new(3, 10_000, Formalism::Classic, 10_000), 2, None, None).unwrap().hits;
    let path = dir.path().join("hits.csv");
    write_hits(fs::File::create(&path).unwrap(), &hits, &["classic".into(), "second line".into()]).unwrap();
    assert_eq!(read_hits(fs::File::open(&path).unwrap()).unwrap(), hits);
}

#[test]
fn checkpoints_are_replaced_atomically_and_resume_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.ckpt");
    let cfg = SearchConfig { block: 500, ..SearchConfig::new(3, 12_000, Formalism::Shortcut, 10_000) };
    let full = run_search(&cfg, 1, None, None).unwrap();

    let mut partial = run_search(&cfg, 3, Some(&path), Some(2)).unwrap();
    assert!(!partial.complete);
    assert_eq!(partial.next_block, 2);
    assert!(!dir.path().join("run.ckpt.tmp").exists());
    let saved = Checkpoint::load(&path).unwrap();
    assert_eq!(saved.next_block, 2);
    assert_eq!(saved.hits, partial.hits);
    for _ in 0..30 {
        if partial.complete {
            break;
        }
        partial = run_search(&cfg, 2, Some(&path), Some(1)).unwrap();
    }
    assert!(partial.complete);
    assert_eq!(partial.hits, full.hits);
    // resuming a finished checkpoint is a no-op
    assert_eq!(run_search(&cfg, 4, Some(&path), None).unwrap(), full);
}

#[test]
fn corrupt_checkpoints_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ckpt");
    fs::write(&path, "version = 1\nlo = 3\n").unwrap();
    let cfg = SearchConfig::new(3, 100, Formalism::Shortcut, 1000);
    assert!(run_search(&cfg, 1, Some(&path), None).is_err());
}

#[test]
fn reference_tables_load_from_a_directory() {
    let dir = tempfile::tempdir().unwrap();
    let builtin = References::builtin().unwrap();
    fs::write(dir.path().join(EXCURSION_FILE), builtin.excursions.to_text()).unwrap();
    fs::write(dir.path().join(DELAY_FILE), builtin.delays.to_text()).unwrap();
    let loaded = References::from_dir(dir.path()).unwrap();
    assert_eq!(loaded.excursions, builtin.excursions);
    assert_eq!(loaded.delays, builtin.delays);
    assert!(loaded.table(RecordKind::DelayT).is_none());

    fs::write(dir.path().join(DELAY_FILE), "#! kind delay-col\n1 0\n3 7\n2 1\n").unwrap();
    let err = References::from_dir(dir.path()).unwrap_err();
    assert!(format!("{err:#}").contains("line 4"), "{err:#}");
}
