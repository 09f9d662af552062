use std::collections::HashSet;

use amlshacl_caex::{parse_aml, AmlDocument, CaexKind};
use amlshacl_mapping::{map_document, mint_iri, MappingConfig, MappingWarning, DEFAULT_LIB_NAMESPACE};
use amlshacl_rdf::vocab::{rdf, rdfs};
use amlshacl_rdf::{isomorphic, serialize_turtle, Graph, Iri, Literal, Term};

fn load(name: &str) -> AmlDocument {
    let path = format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_aml(&std::fs::read(&path).unwrap(), name).unwrap()
}

fn model(name: &str) -> AmlDocument {
    let mut doc = load(name);
    doc.import_libraries(&load("ar_apc_library.aml")).unwrap();
    doc
}

fn aml(local: &str) -> Iri {
    MappingConfig::default().aml(local)
}

fn ty() -> Iri {
    Iri::new_unchecked(rdf::TYPE)
}

fn lib_class(path: &str) -> Term {
    Term::Iri(Iri::new_unchecked(format!("{DEFAULT_LIB_NAMESPACE}{path}")))
}

fn named(g: &Graph, name: &str) -> Term {
    let hits: Vec<_> = g.subjects(&aml("hasName"), &Literal::string(name).into()).collect();
    assert_eq!(hits.len(), 1, "{name}");
    hits[0].clone()
}

#[test]
fn subnet_owns_two_logical_end_points() {
    let (g, report) = map_document(&model("apc_violating.aml"), &MappingConfig::default());
    assert!(report.warnings.is_empty(), "{:?}", report.warnings);
    let subnet = g
        .subjects(&aml("hasName"), &Literal::string("ExampleSubnet").into())
        .next()
        .unwrap()
        .clone();
    let lep = lib_class("CommunicationInterfaceClassLib/LogicalEndPoint");
    let ifaces: Vec<_> = g.objects(&subnet, &aml("hasExternalInterface")).collect();
    assert_eq!(ifaces.len(), 2);
    for i in ifaces {
        assert!(g.contains(&amlshacl_rdf::Triple::new(i.clone(), ty(), lep.clone())));
    }
    assert!(g.contains(&amlshacl_rdf::Triple::new(
        subnet,
        ty(),
        lib_class("AutomationProjectConfigurationRoleClassLib/Subnet")
    )));
}

#[test]
fn single_internal_link_points_at_both_interfaces() {
    let xml = r#"<CAEXFile><InstanceHierarchy Name="IH"><InternalElement Name="E" ID="e">
        <ExternalInterface Name="I1" ID="i1"/>
        <ExternalInterface Name="I2" ID="i2"/>
        <InternalLink Name="L" RefPartnerSideA="i1" RefPartnerSideB="i2"/>
    </InternalElement></InstanceHierarchy></CAEXFile>"#;
    let doc = parse_aml(xml.as_bytes(), "l.aml").unwrap();
    let cfg = MappingConfig::default();
    let (g, _) = map_document(&doc, &cfg);
    let links: Vec<_> = g.subjects(&ty(), &aml("InternalLink").into()).collect();
    assert_eq!(links.len(), 1);
    let iri = |x: &str| Term::Iri(mint_iri(&doc, doc.by_id(x).unwrap(), &cfg));
    let a: Vec<_> = g.objects(links[0], &aml("refPartnerSideA")).collect();
    let b: Vec<_> = g.objects(links[0], &aml("refPartnerSideB")).collect();
    assert_eq!(a, [&iri("i1")]);
    assert_eq!(b, [&iri("i2")]);
    assert!(g
        .matching(None, Some(&aml("refPartnerSideB")), Some(&iri("i1")))
        .is_empty());
}

#[test]
fn dangling_refs_become_warnings() {
    let xml = r#"<CAEXFile><InstanceHierarchy Name="IH"><InternalElement Name="E">
        <ExternalInterface Name="I1" ID="i1" RefBaseClassPath="Nope/X"/>
        <RoleRequirements RefBaseRoleClassPath="Nope/Role"/>
        <InternalLink Name="L" RefPartnerSideA="i1" RefPartnerSideB="missing"/>
    </InternalElement></InstanceHierarchy></CAEXFile>"#;
    let doc = parse_aml(xml.as_bytes(), "d.aml").unwrap();
    let (g, report) = map_document(&doc, &MappingConfig::default());
    assert_eq!(report.warnings.len(), 3, "{:?}", report.warnings);
    assert!(report
        .warnings
        .iter()
        .any(|w| matches!(w, MappingWarning::DanglingInterfaceRef { side: 'B', .. })));
    assert_eq!(g.matching(None, Some(&aml("refPartnerSideA")), None).len(), 1);
    assert!(g.matching(None, Some(&aml("refPartnerSideB")), None).is_empty());
    assert_eq!(g.matching(None, Some(&ty()), None).len(), doc.len() - other_count(&doc));
}

fn other_count(doc: &AmlDocument) -> usize {
    doc.iter().filter(|(_, e)| matches!(e.kind, CaexKind::Other(_))).count()
}

#[test]
fn nameless_attribute_gets_path_iri() {
    let xml = r#"<CAEXFile><InstanceHierarchy Name="AutomationProject">
        <InternalElement Name="ExampleSubnet"><Attribute><Value>x</Value></Attribute></InternalElement>
    </InstanceHierarchy></CAEXFile>"#;
    let doc = parse_aml(xml.as_bytes(), "n.aml").unwrap();
    let (attr, _) = doc.iter().find(|(_, e)| e.kind == CaexKind::Attribute).unwrap();
    let iri = mint_iri(&doc, attr, &MappingConfig::default());
    assert!(iri.as_str().contains("ExampleSubnet"), "{}", iri.as_str());
}

fn fixtures() -> Vec<AmlDocument> {
    vec![
        load("ar_apc_library.aml"),
        model("apc_violating.aml"),
        model("apc_corrected.aml"),
    ]
}

#[test]
fn minted_iris_are_unique_on_fixtures() {
    let cfg = MappingConfig::default();
    for doc in fixtures() {
        let mut seen = HashSet::new();
        for (id, e) in doc.iter() {
            if matches!(e.kind, CaexKind::Other(_)) {
                continue;
            }
            assert!(seen.insert(mint_iri(&doc, id, &cfg)), "{}", doc.file_name);
        }
    }
}

#[test]
fn node_counts_mirror_the_document() {
    let cfg = MappingConfig::default();
    for doc in fixtures() {
        let (g, report) = map_document(&doc, &cfg);
        for kind in [
            CaexKind::InstanceHierarchy,
            CaexKind::InternalElement,
            CaexKind::ExternalInterface,
            CaexKind::InternalLink,
            CaexKind::Attribute,
            CaexKind::RoleRequirements,
            CaexKind::RoleClass,
            CaexKind::InterfaceClass,
            CaexKind::SystemUnitClass,
        ] {
            let typed = g.subjects(&ty(), &aml(kind.as_str()).into()).count();
            assert_eq!(typed, doc.count(&kind), "{kind} in {}", doc.file_name);
            assert_eq!(report.counts.get(kind.as_str()).copied().unwrap_or(0), doc.count(&kind));
        }
    }
}

#[test]
fn library_types_are_backed_by_references() {
    let cfg = MappingConfig::default();
    for doc in fixtures() {
        let (g, _) = map_document(&doc, &cfg);
        let class_iris: HashSet<Term> = doc
            .classes()
            .map(|(id, _)| Term::Iri(mint_iri(&doc, id, &cfg)))
            .collect();
        for t in g.matching(None, Some(&ty()), None) {
            if !class_iris.contains(&t.object) {
                continue;
            }
            let (subject, _) = doc
                .iter()
                .find(|(id, e)| {
                    !matches!(e.kind, CaexKind::Other(_)) && Term::Iri(mint_iri(&doc, *id, &cfg)) == t.subject
                })
                .unwrap();
            let mut sources = vec![subject];
            sources.extend(doc.children(subject).map(|(c, _)| c));
            assert!(sources.iter().any(
                |&s| doc.referenced_class(s).map(|c| Term::Iri(mint_iri(&doc, c, &cfg))) == Some(t.object.clone())
            ));
        }
    }
}

#[test]
fn subclass_chains_match_ancestry() {
    let cfg = MappingConfig::default();
    let sub = Iri::new_unchecked(rdfs::SUB_CLASS_OF);
    for doc in fixtures() {
        let (g, _) = map_document(&doc, &cfg);
        for (id, _) in doc.classes() {
            let expected: Vec<Term> = doc
                .class_ancestry(id)
                .chain
                .iter()
                .map(|&c| Term::Iri(mint_iri(&doc, c, &cfg)))
                .collect();
            let mut chain = vec![Term::Iri(mint_iri(&doc, id, &cfg))];
            loop {
                let supers: Vec<_> = g.objects(chain.last().unwrap(), &sub).cloned().collect();
                assert!(supers.len() <= 1);
                match supers.first() {
                    Some(s) if !chain.contains(s) => chain.push(s.clone()),
                    _ => break,
                }
            }
            assert_eq!(chain, expected);
        }
    }
}

#[test]
fn mapping_is_deterministic() {
    let cfg = MappingConfig::default();
    for doc in fixtures() {
        let (g1, r1) = map_document(&doc, &cfg);
        let (g2, r2) = map_document(&doc, &cfg);
        assert!(isomorphic(&g1, &g2));
        assert_eq!(serialize_turtle(&g1, true), serialize_turtle(&g2, true));
        assert_eq!(r1, r2);
    }
    let a = map_document(&model("apc_violating.aml"), &cfg).0;
    let b = map_document(&model("apc_violating.aml"), &cfg).0;
    assert_eq!(serialize_turtle(&a, true), serialize_turtle(&b, true));
}

#[test]
fn named_lookup_helper_is_unique_on_fixture() {
    let (g, _) = map_document(&model("apc_corrected.aml"), &MappingConfig::default());
    let node = named(&g, "ExampleNode");
    assert_eq!(g.objects(&node, &aml("hasExternalInterface")).count(), 1);
}
