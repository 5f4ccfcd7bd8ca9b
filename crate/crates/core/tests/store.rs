mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use chrono::Duration;
use common::{base_time, tweet};
use nlpulse::classify::{LabeledTweet, TopicLabel};
use nlpulse::linker::{LinkMethod, PaperLink};
use nlpulse::store::{query, CommitBatch, CrashPoint, Page, Selector, Snapshot, Store, StoreError};
use proptest::prelude::*;

fn label(id: &str, label: TopicLabel) -> LabeledTweet {
    LabeledTweet {
        tweet_id: id.into(),
        label,
        confidence: Some(0.5),
        rule_fired: None,
    }
}

fn batch_of(ids: &[(&str, i64)]) -> CommitBatch {
    let mut b = CommitBatch::new(base_time());
    b.inserts = ids.iter().map(|(id, m)| tweet(id, *m)).collect();
    b
}

fn all_ids(snap: &Snapshot, selectors: &[Selector], limit: usize) -> Vec<String> {
    let mut out = Vec::new();
    let mut offset = 0;
    loop {
        let page = query(snap, selectors, Page { offset, limit }).unwrap();
        if page.items.is_empty() {
            break;
        }
        offset += page.items.len();
        out.extend(page.items.iter().map(|t| t.id.clone()));
    }
    out
}

#[test]
fn empty_batch_bumps_version_only() {
    let store = Store::in_memory();
    let s1 = store.commit(batch_of(&[("a", 1)])).unwrap();
    let s2 = store.commit(CommitBatch::new(base_time())).unwrap();
    assert_eq!(s2.version(), s1.version() + 1);
    assert_eq!(s1.data(), s2.data());
}

#[test]
fn inserted_tweets_are_found_by_id() {
    let store = Store::in_memory();
    let snap = store.commit(batch_of(&[("1", 0), ("2", 5)])).unwrap();
    for id in ["1", "2"] {
        let page = query(&snap, &[Selector::Id(id.into())], Page::default()).unwrap();
        assert_eq!(page.total, 1);
        assert_eq!(page.items[0].id, id);
    }
}

#[test]
fn dangling_ids_are_rejected() {
    let store = Store::in_memory();
    let mut b = CommitBatch::new(base_time());
    b.updates.push(tweet("ghost", 0));
    assert!(matches!(store.commit(b), Err(StoreError::Consistency(_))));

    let mut b = CommitBatch::new(base_time());
    b.labels.push(label("ghost", TopicLabel::Other));
    assert!(matches!(store.commit(b), Err(StoreError::Consistency(_))));

    let mut b = batch_of(&[("x", 0)]);
    b.links.push(PaperLink {
        paper_id: "p".into(),
        tweet_id: "y".into(),
        method: LinkMethod::Url,
        evidence: "u".into(),
    });
    assert!(matches!(store.commit(b), Err(StoreError::Consistency(_))));
    assert_eq!(store.snapshot().version(), 0);
}

#[test]
fn double_insert_is_rejected() {
    let store = Store::in_memory();
    store.commit(batch_of(&[("a", 0)])).unwrap();
    assert!(matches!(store.commit(batch_of(&[("a", 0)])), Err(StoreError::Consistency(_))));
}

#[test]
fn topic_selector_returns_exactly_labeled_tweets() {
    let store = Store::in_memory();
    let mut b = batch_of(&[]);
    for i in 0..60 {
        let id = format!("t{i:02}");
        b.inserts.push(tweet(&id, i));
        let l = TopicLabel::ALL[i as usize % 6];
        b.labels.push(label(&id, l));
    }
    let snap = store.commit(b).unwrap();
    let got: BTreeSet<String> = all_ids(&snap, &[Selector::Topic(TopicLabel::CallForPapers)], 7).into_iter().collect();
    let want: BTreeSet<String> = snap
        .data()
        .labels
        .values()
        .filter(|l| l.label == TopicLabel::CallForPapers)
        .map(|l| l.tweet_id.clone())
        .collect();
    assert_eq!(got, want);
    assert_eq!(want.len(), 10);
}

#[test]
fn offset_beyond_total_gives_empty_page() {
    let store = Store::in_memory();
    let snap = store.commit(batch_of(&[("a", 0), ("b", 1), ("c", 2)])).unwrap();
    let page = query(&snap, &[], Page { offset: 10, limit: 5 }).unwrap();
    assert!(page.items.is_empty());
    assert_eq!(page.total, 3);
}

#[test]
fn page_limit_is_capped() {
    let snap = Snapshot::empty();
    assert!(matches!(
        query(&snap, &[], Page { offset: 0, limit: 201 }),
        Err(StoreError::PageTooLarge(201))
    ));
    assert!(query(&snap, &[], Page { offset: 0, limit: 200 }).is_ok());
}

#[test]
fn unknown_selector_key_errors() {
    assert!(matches!(Selector::parse("colour", "red"), Err(StoreError::UnknownSelector(_))));
    assert!(matches!(Selector::parse("topic", "Gossip"), Err(StoreError::UnknownSelector(_))));
    assert_eq!(
        Selector::parse("topic", "callforpapers").unwrap(),
        Selector::Topic(TopicLabel::CallForPapers)
    );
}

#[test]
fn time_range_is_half_open() {
    let store = Store::in_memory();
    let snap = store.commit(batch_of(&[("a", 0), ("b", 60), ("c", 120)])).unwrap();
    let sel = Selector::TimeRange {
        from: Some(base_time()),
        to: Some(base_time() + Duration::minutes(120)),
    };
    assert_eq!(all_ids(&snap, &[sel], 10), vec!["b", "a"]);
}

#[test]
fn crash_before_manifest_swap_keeps_previous_version() {
    for point in [CrashPoint::AfterSegment, CrashPoint::AfterIndex] {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        store.commit(batch_of(&[("a", 0)])).unwrap();
        let before = store.snapshot();
        assert!(store.commit_with_crash(batch_of(&[("b", 1)]), point).is_err());
        drop(store);

        let reopened = Store::open(dir.path()).unwrap();
        let snap = reopened.snapshot();
        assert_eq!(snap.version(), 1);
        assert_eq!(snap.data(), before.data());
        assert!(snap.tweet("b").is_none());

        // the leftover segment is overwritten by the next real commit
        let next = reopened.commit(batch_of(&[("c", 2)])).unwrap();
        assert_eq!(next.version(), 2);
        drop(reopened);
        let again = Store::open(dir.path()).unwrap().snapshot();
        assert_eq!(again.version(), 2);
        assert!(again.tweet("c").is_some() && again.tweet("b").is_none());
    }
}

#[test]
fn snapshot_isolation_under_concurrent_commits() {
    let store = Arc::new(Store::in_memory());
    store.commit(batch_of(&[("a", 0), ("b", 1)])).unwrap();
    let old = store.snapshot();
    let before = all_ids(&old, &[], 1);

    let writer = {
        let store = store.clone();
        std::thread::spawn(move || {
            for i in 0..50 {
                store.commit(batch_of(&[(&format!("n{i}"), 100 + i)])).unwrap();
            }
        })
    };
    for _ in 0..50 {
        assert_eq!(all_ids(&old, &[], 1), before);
    }
    writer.join().unwrap();
    assert_eq!(all_ids(&old, &[], 1), before);
    assert_eq!(store.snapshot().len(), 52);
    assert_eq!(old.version(), 1);
}

#[derive(Debug, Clone)]
struct Spec {
    minutes: i64,
    topic: usize,
    conf: Option<&'static str>,
    paper: Option<&'static str>,
    likes: u64,
}

fn spec_strategy() -> impl Strategy<Value = Spec> {
    (
        0i64..50,
        0usize..6,
        prop::option::of(prop::sample::select(vec!["acl2020", "emnlp2020"])),
        prop::option::of(prop::sample::select(vec!["p1", "p2", "p3"])),
        0u64..100,
    )
        .prop_map(|(minutes, topic, conf, paper, likes)| Spec {
            minutes,
            topic,
            conf,
            paper,
            likes,
        })
}

fn commit_specs(store: &Store, batches: &[Vec<Spec>]) {
    let mut n = store.snapshot().len();
    let mut known: Vec<String> = Vec::new();
    for specs in batches {
        let mut b = CommitBatch::new(base_time() + Duration::days(n as i64 + 1));
        for s in specs {
            let id = format!("id{n:04}");
            n += 1;
            let mut t = tweet(&id, s.minutes);
            t.likes = s.likes;
            b.inserts.push(t);
            b.labels.push(label(&id, TopicLabel::ALL[s.topic]));
            if let Some(c) = s.conf {
                b.conference_tags.insert(id.clone(), [c.to_string()].into());
            }
            if let Some(p) = s.paper {
                b.links.push(PaperLink {
                    paper_id: p.into(),
                    tweet_id: id.clone(),
                    method: LinkMethod::Title,
                    evidence: "a title long enough to count".into(),
                });
            }
            known.push(id);
        }
        // refresh counters of an earlier tweet
        if let Some(first) = known.first().filter(|f| !b.inserts.iter().any(|t| &t.id == *f)) {
            let mut t = store.snapshot().tweet(first).unwrap().as_ref().clone();
            t.likes += 1;
            b.updates.push(t);
        }
        store.commit(b).unwrap();
    }
}

fn selector_sets() -> Vec<Vec<Selector>> {
    vec![
        vec![],
        vec![Selector::Topic(TopicLabel::CallForPapers)],
        vec![Selector::Conference("acl2020".into())],
        vec![Selector::Paper("p2".into())],
        vec![Selector::Conference("emnlp2020".into()), Selector::Topic(TopicLabel::NewPaper)],
        vec![Selector::TimeRange {
            from: Some(base_time() + Duration::minutes(10)),
            to: Some(base_time() + Duration::minutes(30)),
        }],
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn round_trip_through_disk(batches in prop::collection::vec(prop::collection::vec(spec_strategy(), 0..12), 1..5)) {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        commit_specs(&store, &batches);
        let live = store.snapshot();
        drop(store);
        let reopened = Store::open(dir.path()).unwrap().snapshot();
        prop_assert_eq!(reopened.version(), live.version());
        prop_assert_eq!(reopened.created_at(), live.created_at());
        prop_assert_eq!(reopened.data(), live.data());
        for sel in selector_sets() {
            prop_assert_eq!(all_ids(&reopened, &sel, 200), all_ids(&live, &sel, 200));
        }
    }

    #[test]
    fn pages_concatenate_to_full_result(
        specs in prop::collection::vec(spec_strategy(), 0..60),
        limit in 1usize..15,
    ) {
        let store = Store::in_memory();
        commit_specs(&store, &[specs]);
        let snap = store.snapshot();
        for sel in selector_sets() {
            let paged = all_ids(&snap, &sel, limit);
            let full = query(&snap, &sel, Page { offset: 0, limit: 200 }).unwrap();
            let expected: Vec<String> = full.items.iter().map(|t| t.id.clone()).collect();
            prop_assert_eq!(&paged, &expected);
            prop_assert_eq!(full.total, expected.len());
            let unique: BTreeSet<&String> = paged.iter().collect();
            prop_assert_eq!(unique.len(), paged.len());
            // order: time desc then id asc
            for w in full.items.windows(2) {
                prop_assert!((std::cmp::Reverse(w[0].time_utc), &w[0].id) < (std::cmp::Reverse(w[1].time_utc), &w[1].id));
            }
            // brute-force filter
            let brute: BTreeSet<String> = snap.ordered().iter().filter(|t| {
                sel.iter().all(|s| match s {
                    Selector::Topic(l) => snap.label(&t.id).map(|x| x.label) == Some(*l),
                    Selector::Conference(c) => snap.conference_tags(&t.id).is_some_and(|s| s.contains(c)),
                    Selector::Paper(p) => snap.data().links.contains_key(&(p.clone(), t.id.clone())),
                    Selector::TimeRange { from, to } => from.is_none_or(|f| t.time_utc >= f) && to.is_none_or(|e| t.time_utc < e),
                    Selector::Id(i) => &t.id == i,
                })
            }).map(|t| t.id.clone()).collect();
            prop_assert_eq!(brute, expected.iter().cloned().collect::<BTreeSet<_>>());
        }
    }

    #[test]
    fn old_snapshot_never_changes(first in prop::collection::vec(spec_strategy(), 0..20), second in prop::collection::vec(spec_strategy(), 0..20)) {
        let store = Store::in_memory();
        commit_specs(&store, &[first]);
        let old = store.snapshot();
        let before: Vec<_> = selector_sets().iter().map(|s| all_ids(&old, s, 200)).collect();
        let data_before = old.data().clone();
        commit_specs(&store, &[second]);
        let after: Vec<_> = selector_sets().iter().map(|s| all_ids(&old, s, 200)).collect();
        prop_assert_eq!(before, after);
        prop_assert_eq!(&data_before, old.data());
    }
}
