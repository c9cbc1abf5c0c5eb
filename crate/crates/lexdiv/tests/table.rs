use lexdiv::table::{load, save, TableError};
use lexdiv_core::{Dataset, NGramTable, Sample, Split, Tokenizer};

fn train() -> Dataset {
    let rows = ["the cat sat on the mat", "the cat sat on the hat today", "a b c d e f g", "a b c d"];
    Dataset::new(
        "t",
        Split::Train,
        rows.iter().enumerate().map(|(i, s)| Sample::new(format!("s{i}"), "doc", *s)).collect(),
    )
    .unwrap()
}

#[test]
fn round_trip() {
    let tok = Tokenizer::default();
    let table = NGramTable::build(&train(), 4, &tok).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.bin");
    save(&table, &path).unwrap();
    let back = load(&path, &tok, Some(4)).unwrap();
    assert_eq!(back.sorted_entries(), table.sorted_entries());
    assert_eq!(back.total_summaries(), 4);
    assert_eq!(back.corpus_fingerprint(), table.corpus_fingerprint());
    assert_eq!(back.count_tokens(&["the", "cat", "sat", "on"]), 2);

    let bytes = std::fs::read(&path).unwrap();
    save(&back, &path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), bytes);
}

#[test]
fn refuses_other_tokenizer_and_order() {
    let table = NGramTable::build(&train(), 4, &Tokenizer::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.bin");
    save(&table, &path).unwrap();
    assert!(matches!(load(&path, &Tokenizer::new(true), None), Err(TableError::TokenizerMismatch { .. })));
    assert!(matches!(load(&path, &Tokenizer::default(), Some(3)), Err(TableError::OrderMismatch { .. })));
}

#[test]
fn rejects_foreign_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.bin");
    std::fs::write(&path, b"nope, not a table").unwrap();
    assert!(matches!(load(&path, &Tokenizer::default(), None), Err(TableError::BadMagic)));
    std::fs::write(&path, b"LXNG\x01\x00").unwrap();
    assert!(matches!(load(&path, &Tokenizer::default(), None), Err(TableError::Io(_))));
}

proptest::proptest! {
    #[test]
    fn any_table_round_trips(
        summaries in proptest::collection::vec("[a-e]( [a-e]){0,12}", 1..20),
        n in 1usize..5,
        case_sensitive: bool,
    ) {
        let tok = Tokenizer::new(case_sensitive);
        let ds = Dataset::new(
            "p",
            Split::Train,
            summaries.iter().enumerate().map(|(i, s)| Sample::new(format!("s{i}"), "d", s.as_str())).collect(),
        )
        .unwrap();
        let table = NGramTable::build(&ds, n, &tok).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.bin");
        save(&table, &path).unwrap();
        let back = load(&path, &tok, Some(n)).unwrap();
        proptest::prop_assert_eq!(back, table);
    }
}
