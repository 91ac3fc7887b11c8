use std::path::PathBuf;

use folidx::catalog::{builtin_names, builtin_source, load_catalog_dir};
use folidx::document::{canonicalize, load_example, parse_example};
use folidx::Error;

fn catalog_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("catalog")
}

#[test]
fn builtins_round_trip_canonically() {
    for name in builtin_names() {
        let src = builtin_source(name).unwrap();
        let doc = parse_example(src).unwrap();
        assert_eq!(
            doc.to_canonical_json(),
            canonicalize(src).unwrap(),
            "{name}"
        );
        // a second pass is a fixed point
        let again = parse_example(&doc.to_canonical_json()).unwrap();
        assert_eq!(again, doc, "{name}");
    }
}

#[test]
fn on_disk_catalog_matches_builtins() {
    let docs = load_catalog_dir(catalog_dir()).unwrap();
    let mut names: Vec<_> = docs.iter().map(|d| d.name.clone()).collect();
    let mut builtin: Vec<_> = builtin_names().map(str::to_string).collect();
    names.sort();
    builtin.sort();
    assert_eq!(names, builtin);
    for name in builtin_names() {
        let doc = load_example(catalog_dir().join(format!("{name}.json"))).unwrap();
        doc.validate().unwrap();
    }
}

#[test]
fn errors_are_staged() {
    let src = builtin_source("rotation-s2").unwrap();
    assert!(matches!(parse_example("[1,"), Err(Error::Parse(_))));

    let wrong_type = src.replacen("\"euler_closed\": 2", "\"euler_closed\": \"two\"", 1);
    match parse_example(&wrong_type) {
        Err(Error::Schema { field, .. }) => assert_eq!(field, "strata[0].quotient.euler_closed"),
        other => panic!("{other:?}"),
    }

    let empty_citation = {
        let mut v: serde_json::Value = serde_json::from_str(src).unwrap();
        v["expected"]["euler"]["citation"] = "".into();
        v.to_string()
    };
    assert!(matches!(
        parse_example(&empty_citation),
        Err(Error::Validation(_))
    ));
}
