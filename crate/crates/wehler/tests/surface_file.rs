use proptest::prelude::*;
use wehler::surface_file::{parse, serialize, Modulus, ParseError};
use wehler_core::random::{random_surface, Degeneracy};
use wehler_core::{FpSurface, PrimeField};

type LEntry = (usize, usize, i64);
type QEntry = (usize, usize, usize, usize, i64);

fn entries() -> impl Strategy<Value = (Vec<LEntry>, Vec<QEntry>)> {
    (
        prop::collection::vec((0..3usize, 0..3usize, -50i64..50), 1..10),
        prop::collection::vec((0..3usize, 0..3usize, 0..3usize, 0..3usize, -50i64..50), 1..20),
    )
}

fn render(p: u64, l: &[LEntry], q: &[QEntry]) -> String {
    let mut text = format!("# generated\np {p}\n");
    for (i, j, c) in l {
        text += &format!("L {i} {j} {c}\n");
    }
    for (i, j, k, m, c) in q {
        text += &format!("Q {i} {j} {k} {m} {c}   # entry\n\n");
    }
    text
}

proptest! {
    #[test]
    fn serialize_round_trip((l, q) in entries(), p in prop::sample::select(vec![5u64, 7, 13, 29])) {
        let Ok(s) = parse(&render(p, &l, &q)).unwrap().to_fp(None) else { return Ok(()) };
        let text = serialize(&s);
        let back = parse(&text).unwrap().to_fp(None).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn rational_file_reduces_like_prime_file((l, q) in entries()) {
        let over_q = parse(&render(3, &l, &q).replace("p 3", "p Q")).unwrap();
        let over_p = parse(&render(29, &l, &q)).unwrap();
        prop_assert_eq!(over_q.modulus, Modulus::Rational);
        prop_assert_eq!(over_q.to_fp(Some(29)).ok(), over_p.to_fp(None).ok());
        if let (Ok(r), Ok(f)) = (over_q.to_rational(), over_p.to_fp(None)) {
            prop_assert_eq!(r.reduce(PrimeField::new(29).unwrap()).ok(), Some(f));
        }
    }
}

#[test]
fn random_surfaces_round_trip() {
    for seed in 0..3 {
        let s: FpSurface = random_surface(37, seed, Degeneracy::NonDegenerate).unwrap();
        assert_eq!(parse(&serialize(&s)).unwrap().to_fp(None).unwrap(), s);
    }
}

#[test]
fn canonical_output_is_sorted() {
    let s = parse("p 7\nQ 2 2 0 0 1\nL 2 1 3\nQ 0 1 1 0 -1\nL 0 0 1\n").unwrap().to_fp(None).unwrap();
    assert_eq!(serialize(&s), "p 7\nL 0 0 1\nL 2 1 3\nQ 0 1 0 1 6\nQ 2 2 0 0 1\n");
}

#[test]
fn errors_carry_line_numbers() {
    let err = parse("p 7\n\n# c\nL 0 0 1\nQ 0 0 a 1 1\n").unwrap_err();
    assert!(matches!(err, ParseError::Syntax { line: 5, .. }), "{err}");
    assert!(err.to_string().starts_with("line 5:"));
    assert!(matches!(parse("p 7\nX 1\n"), Err(ParseError::Syntax { line: 2, .. })));
    assert!(matches!(parse("p 7\np 11\n"), Err(ParseError::Syntax { line: 2, .. })));
    assert!(matches!(parse(""), Err(ParseError::MissingHeader)));
    let f = parse("p Q\nL 0 0 1\nQ 0 0 0 0 1\n").unwrap();
    assert!(f.to_fp(None).is_err());
    assert!(parse("p 7\nL 0 0 1\nQ 0 0 0 0 1\n").unwrap().to_fp(Some(11)).is_err());
}
