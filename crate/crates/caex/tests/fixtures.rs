use amlshacl_caex::{parse_aml, AmlDocument, CaexKind};

fn load(name: &str) -> AmlDocument {
    let path = format!("{}/../core/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let bytes = std::fs::read(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    parse_aml(&bytes, name).unwrap()
}

fn names(doc: &AmlDocument, ids: &[amlshacl_caex::ElementId]) -> Vec<String> {
    ids.iter()
        .map(|&i| doc.element(i).name.clone().unwrap_or_default())
        .collect()
}

#[test]
fn library_declares_logical_end_point() {
    let doc = load("ar_apc_library.aml");
    let found = doc
        .interface_class_libs
        .iter()
        .flat_map(|&lib| doc.children_of_kind(lib, &CaexKind::InterfaceClass))
        .any(|(_, e)| e.name.as_deref() == Some("LogicalEndPoint"));
    assert!(found);
    assert!(doc.instance_hierarchies.is_empty());
}

#[test]
fn class_paths_resolve_on_the_library() {
    let doc = load("ar_apc_library.aml");
    let lep = doc
        .resolve_class_path("CommunicationInterfaceClassLib/LogicalEndPoint")
        .unwrap();
    assert_eq!(doc.element(lep).kind, CaexKind::InterfaceClass);
    let nested = doc
        .resolve_class_path("AutomationMLInterfaceClassLib/AutomationMLBaseInterface/Communication")
        .unwrap();
    assert_eq!(doc.element(nested).name.as_deref(), Some("Communication"));
    assert!(doc.resolve_class_path("NoSuchLib/X").is_none());

    let anc = doc.class_ancestry(lep);
    assert_eq!(
        names(&doc, &anc.chain),
        ["LogicalEndPoint", "Communication", "AutomationMLBaseInterface"]
    );
    assert!(anc.warnings.is_empty());
}

#[test]
fn violating_model_structure() {
    let doc = load("apc_violating.aml");
    assert_eq!(doc.count(&CaexKind::InternalElement), 4);
    assert_eq!(doc.count(&CaexKind::ExternalInterface), 5);
    assert_eq!(doc.count(&CaexKind::InternalLink), 1);
    assert_eq!(doc.count(&CaexKind::RoleRequirements), 3);

    let subnet = doc
        .iter()
        .find(|(_, e)| e.name.as_deref() == Some("ExampleSubnet"))
        .unwrap()
        .0;
    let ifaces: Vec<_> = doc
        .children_of_kind(subnet, &CaexKind::ExternalInterface)
        .map(|(_, e)| e.name.clone().unwrap())
        .collect();
    assert_eq!(ifaces, ["LogicalEndPoint", "LogicalEndPoint2"]);

    let by_name = doc.resolve_interface_ref("ExampleSubnet:LogicalEndPoint").unwrap();
    assert_eq!(
        doc.element(by_name).id.as_deref(),
        Some("2837dbc9-a0ec-58d2-a4aa-d284974fcca5")
    );
    let (_, link) = doc.iter().find(|(_, e)| e.kind == CaexKind::InternalLink).unwrap();
    let a = doc
        .resolve_interface_ref(link.ref_partner_side_a.as_deref().unwrap())
        .unwrap();
    let b = doc
        .resolve_interface_ref(link.ref_partner_side_b.as_deref().unwrap())
        .unwrap();
    assert_eq!(a, by_name);
    assert_eq!(doc.element(b).name.as_deref(), Some("PlainInterface"));
}

#[test]
fn model_plus_library_resolves_roles() {
    let mut doc = load("apc_corrected.aml");
    let lib = load("ar_apc_library.aml");
    assert!(doc.import_libraries(&lib).unwrap().is_empty());
    let subnet_role = doc
        .resolve_class_path("AutomationProjectConfigurationRoleClassLib/Subnet")
        .unwrap();
    let reqs: Vec<_> = doc
        .iter()
        .filter(|(_, e)| e.kind == CaexKind::RoleRequirements)
        .map(|(id, _)| doc.referenced_class(id))
        .collect();
    assert_eq!(reqs.len(), 3);
    assert!(reqs.iter().all(Option::is_some));
    assert_eq!(reqs[0], Some(subnet_role));
    for (key, &id) in doc.id_index() {
        assert_eq!(doc.element(id).id.as_deref(), Some(key.as_str()));
    }
}
