use amlshacl_rdf::{isomorphic, parse_turtle, serialize_turtle, BlankNode, Graph, Iri, Literal, Term, Triple};
use proptest::prelude::*;

fn iri_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        (0..6u8).prop_map(|i| Term::Iri(Iri::new(format!("http://e/n{i}")).unwrap())),
        Just(Term::Iri(
            Iri::new("http://e/odd path/x#frag").unwrap_or_else(|_| unreachable!())
        )),
        Just(Term::Iri(Iri::new("urn:uuid:1234-abcd").unwrap())),
    ]
}

fn blank_term() -> impl Strategy<Value = Term> {
    (0..5u8).prop_map(|i| Term::BlankNode(BlankNode::new(format!("x{i}")).unwrap()))
}

fn literal_term() -> impl Strategy<Value = Term> {
    prop_oneof![
        "[a-z \"\\\\\n\té]{0,8}".prop_map(|s| Term::Literal(Literal::string(s))),
        (any::<i32>()).prop_map(|i| Term::Literal(Literal::integer(i as i64))),
        ("[a-z]{0,5}", "[a-z]{2}").prop_map(|(s, t)| Term::Literal(Literal::lang(s, t))),
        any::<bool>().prop_map(|b| Term::Literal(Literal::boolean(b))),
    ]
}

fn triple() -> impl Strategy<Value = Triple> {
    let subject = prop_oneof![iri_term(), blank_term()];
    let predicate = (0..4u8).prop_map(|i| Iri::new(format!("http://e/p{i}")).unwrap());
    let object = prop_oneof![iri_term(), blank_term(), literal_term()];
    (subject, predicate, object).prop_map(|(s, p, o)| Triple::new(s, p, o))
}

fn graph() -> impl Strategy<Value = Graph> {
    prop::collection::vec(triple(), 0..30).prop_map(|ts| {
        let mut g: Graph = ts.into_iter().collect();
        g.set_prefix("ex", "http://e/");
        g
    })
}

fn relabel(g: &Graph) -> Graph {
    let mut out = Graph::new();
    let map = |t: &Term| match t {
        Term::BlankNode(b) => Term::BlankNode(BlankNode::new(format!("r_{}", b.label())).unwrap()),
        other => other.clone(),
    };
    for t in g.iter() {
        out.insert(Triple::new(map(&t.subject), t.predicate.clone(), map(&t.object)));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn turtle_round_trip_is_isomorphic(g in graph(), sort in any::<bool>()) {
        let text = serialize_turtle(&g, sort);
        let back = parse_turtle(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert!(isomorphic(&g, &back), "{}", text);
    }

    #[test]
    fn full_wildcard_match_returns_every_triple(g in graph()) {
        prop_assert_eq!(g.matching(None, None, None).len(), g.len());
    }

    #[test]
    fn relabelled_graph_is_isomorphic(g in graph()) {
        prop_assert!(isomorphic(&g, &relabel(&g)));
    }

    #[test]
    fn canonical_output_is_stable_across_reparse(g in graph()) {
        let once = serialize_turtle(&g, true);
        let again = serialize_turtle(&parse_turtle(&once).unwrap(), true);
        prop_assert_eq!(once, again);
    }

    #[test]
    fn dropping_a_triple_breaks_isomorphism(g in graph(), pick in any::<prop::sample::Index>()) {
        prop_assume!(!g.is_empty());
        let victim = g.iter().nth(pick.index(g.len())).unwrap().clone();
        let mut smaller = g.clone();
        smaller.retain(|t| t != &victim);
        prop_assert!(!isomorphic(&g, &smaller));
    }
}
