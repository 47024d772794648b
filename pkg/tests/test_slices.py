import pytest
from hypothesis import given
from hypothesis import strategies as st

from archslicer.analysis import Analyzer
from archslicer.config import config_from_mapping
from archslicer.lexer import extract_methods
from archslicer.slices import (CONNECTED, DISCONNECTED, RELATION_KINDS, SliceRecord,
                               find_member_usages, parse_slice_text, relation_kind,
                               render_slice_text, text_view)

# usage search -------------------------------------------------------------

FLOW = """public class Store {
    private final Registry registry = new Registry();

    public void open() {
        Cache c = new Cache<Key>();
        c.warm();
    }

    public void put(Object o) {
        registry.add(o);
    }

    public int size() {
        return 0;
    }

    public void reset() {
        Cache tmp = null;
        tmp = new Cache<Key>();
        tmp.clear();
    }
}
"""


def _usages(text, target):
    return dict(find_member_usages(text, extract_methods(text), target))


def test_direct_use_reports_line():
    assert _usages(FLOW, "Cache") == {"open": (5, 6), "reset": (18, 19, 20)}


def test_field_flow_reaches_other_methods():
    assert _usages(FLOW, "Registry") == {"put": (10,)}


def test_variable_flow_through_generic_argument():
    assert set(_usages(FLOW, "Key")) == {"open", "reset"}


def test_unused_target_has_no_usages():
    assert _usages(FLOW, "Nothing") == {}


def test_string_mentions_do_not_count():
    text = 'class A {\n    void f() {\n        log("Cache is cold");\n    }\n}\n'
    assert _usages(text, "Cache") == {}


def test_credential_usage_in_builder(corpus):
    fx = corpus["fx-azure"]
    text = (fx.path / "sdk/storage/azure-storage-blob-cryptography/src/main/java/com/azure/storage/"
            "blob/specialized/cryptography/EncryptedBlobClientBuilder.java").read_text()
    assert _usages(text, "SasTokenCredential")["sasToken"][0] == 272


# rendering ----------------------------------------------------------------

def test_member_record_renders_with_aliases():
    rec = SliceRecord(4, "azure.storage.blob.cryptography", "EncryptedBlobClientBuilder",
                      "sasToken", "added", CONNECTED, "azure.storage.common", "SasTokenCredential")
    aliases = {"azure.storage.blob.cryptography": "ASBC", "azure.storage.common": "ASC",
               "EncryptedBlobClientBuilder": "EBCB", "SasTokenCredential": "STC"}
    assert render_slice_text(rec, aliases) == "ASBC:EBCB=>sasToken<-ASC:STC"
    assert render_slice_text(rec).startswith("azure.storage.blob.cryptography:")


def test_descriptor_record_rendering():
    rec = SliceRecord(1, "m1", "module-info", relation=CONNECTED, target_module="c.d",
                      operation="requires")
    assert render_slice_text(rec) == "m1=>MO(requires,c.d)<-c.d"


def test_disconnected_uses_cross_separator():
    rec = SliceRecord(3, "m", "Gone", relation=DISCONNECTED, target_module="n", target_class="T")
    assert render_slice_text(rec) == "m:Gone-x-n:T"
    assert parse_slice_text("m:Gone-x-n:T").relation == DISCONNECTED


def test_unparseable_line():
    with pytest.raises(ValueError):
        parse_slice_text("not a slice")


def test_relation_kinds_cover_every_combination():
    assert len(RELATION_KINDS) == len(set(RELATION_KINDS)) == 16
    rec = SliceRecord(2, "m", "C", "f", "added", CONNECTED, "n", "T")
    assert relation_kind(rec) == ("class_added", CONNECTED, "member")
    assert relation_kind(SliceRecord(5, "m", "C")) is None


MOD = st.from_regex(r"[a-z][a-z0-9]{0,5}(\.[a-z][a-z0-9]{0,5}){0,2}", fullmatch=True)
CLS = st.from_regex(r"[A-Z][A-Za-z0-9]{0,8}", fullmatch=True)
MEMBER = st.one_of(st.none(), st.from_regex(r"[a-z][A-Za-z0-9]{0,8}", fullmatch=True))


@given(category=st.sampled_from([2, 3, 4]), sm=MOD, sc=CLS, member=MEMBER,
       rel=st.sampled_from([CONNECTED, DISCONNECTED]), tm=MOD, tc=st.one_of(st.none(), CLS))
def test_render_parse_round_trip(category, sm, sc, member, rel, tm, tc):
    rec = SliceRecord(category, sm, sc, member, "modified", rel, tm, tc)
    assert parse_slice_text(render_slice_text(rec)) == text_view(rec)


# whole-corpus invariants --------------------------------------------------

def _documents(corpus):
    for fx in corpus.values():
        with Analyzer(fx.path, config_from_mapping(fx.config)) as analyzer:
            for c in fx.commits:
                commit = analyzer.load(c.sha)
                yield fx, commit, analyzer.analyze(c.sha)[2]


def test_corpus_documents_satisfy_record_invariants(corpus):
    for fx, commit, doc in _documents(corpus):
        if not doc.verdict.is_m2m:
            assert {r.category for r in doc.slices} <= {5}
        for r in doc.slices:
            assert 1 <= r.category <= 5
            if r.category == 1:
                assert r.member is None and r.target_class is None and r.operation
            if r.category == 5:
                assert r.target_module is None and r.relation is None
            if r.category == 2:
                assert r.relation == CONNECTED
            if r.category == 3:
                assert r.relation == DISCONNECTED
            assert list(r.evidence_lines) == sorted(set(r.evidence_lines))


def test_every_changed_class_is_accounted_for(corpus):
    for fx, commit, doc in _documents(corpus):
        sliced = {r.source_class for r in doc.slices}
        for f in commit.files:
            if f.path.endswith((".java", ".kt")) and not f.is_descriptor:
                stem = f.path.rsplit("/", 1)[-1].rsplit(".", 1)[0]
                assert stem in sliced or f.path in doc.non_m2m_classes, (fx.name, f.path)


def test_corpus_slices_round_trip_through_text(corpus):
    for fx, _, doc in _documents(corpus):
        for r in doc.slices:
            line = render_slice_text(r, fx.alias_map)
            assert parse_slice_text(line, fx.alias_map) == text_view(r), line


def test_instances_are_distinct_five_tuples(corpus):
    for _, _, doc in _documents(corpus):
        keys = [r.instance_key() for r in doc.slices if r.category != 5]
        assert len(keys) == len(set(keys)) == doc.instance_count
