// Copyright 2026 The heart-timeline Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "heart/timeline.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <tuple>

namespace heart {
namespace {

// Lookup tables over a canonicalized copy of the document.
class DocumentIndex {
 public:
  DocumentIndex(const AnnotatedDocument& doc, const PatternTable& table) : doc_(doc) {
    canonicalize(doc_);
    for (std::size_t i = 0; i < doc_.entities.size(); ++i) {
      by_id_.emplace(doc_.entities[i].id, i);
    }
    for (const auto& r : doc_.relations) {
      if (find(r.source) && (r.target == kDctId || find(r.target)))
        outgoing_[r.source].push_back(&r);
    }
    for (auto& [id, rels] : outgoing_) {
      std::stable_sort(rels.begin(), rels.end(), [&](const Relation* a, const Relation* b) {
        return std::make_tuple(mention(a->target), a->kind, std::cref(a->target)) <
               std::make_tuple(mention(b->target), b->kind, std::cref(b->target));
      });
    }
    for (const auto& e : doc_.entities) {
      if (e.kind != EntityKind::Timex3) continue;
      TimeAnchor anchor = table.normalize(e.surface, e.timex_type, doc_.dct);
      if ((e.timex_type && *e.timex_type == TimexType::Duration) ||
          std::holds_alternative<DurationAmount>(anchor))
        durations_.insert(e.id);
      anchors_.emplace(e.id, std::move(anchor));
    }
  }

  const AnnotatedDocument& doc() const { return doc_; }

  const Entity* find(std::string_view id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &doc_.entities[it->second];
  }

  std::int64_t mention(std::string_view id) const {
    if (id == kDctId) return -1;
    const Entity* e = find(id);
    return e ? static_cast<std::int64_t>(e->span.begin) : -1;
  }

  // Valid relations leaving `id`, ordered by target mention.
  const std::vector<const Relation*>& outgoing(std::string_view id) const {
    static const std::vector<const Relation*> kEmpty;
    auto it = outgoing_.find(id);
    return it == outgoing_.end() ? kEmpty : it->second;
  }

  bool is_timex_target(std::string_view id) const {
    if (id == kDctId) return true;
    const Entity* e = find(id);
    return e && e->kind == EntityKind::Timex3;
  }

  bool is_duration(std::string_view id) const { return durations_.count(id) > 0; }

  const TimeAnchor& anchor(std::string_view id) const { return anchors_.find(id)->second; }

 private:
  AnnotatedDocument doc_;
  std::map<std::string, std::size_t, std::less<>> by_id_;
  std::map<std::string, std::vector<const Relation*>, std::less<>> outgoing_;
  std::set<std::string, std::less<>> durations_;
  std::map<std::string, TimeAnchor, std::less<>> anchors_;
};

// Temporal relations that place a bundle: those of its root, or when the root
// has none, those of its other members in mention order.
std::vector<const Relation*> placing_relations(const DocumentIndex& ix,
                                               const EntityBundle& bundle) {
  auto collect = [&](std::string_view id, std::vector<const Relation*>& out) {
    for (const Relation* r : ix.outgoing(id)) {
      if (is_temporal(r->kind) && ix.is_timex_target(r->target)) out.push_back(r);
    }
  };
  std::vector<const Relation*> out;
  collect(bundle.root_id, out);
  if (!out.empty()) return out;
  std::vector<std::string> members = bundle.contained_ids;
  if (bundle.key_value) members.push_back(*bundle.key_value);
  std::sort(members.begin(), members.end(), [&](const auto& a, const auto& b) {
    return ix.mention(a) < ix.mention(b);
  });
  for (const auto& id : members) collect(id, out);
  return out;
}

std::string cluster_id_for(std::string_view timex_id) { return "c-" + std::string(timex_id); }

std::optional<std::string> attribute_of(const Entity& e) {
  if (e.certainty) return std::string(to_string(*e.certainty));
  if (e.state) return std::string(to_string(*e.state));
  return std::nullopt;
}

BundleResult bundle_with_index(const DocumentIndex& ix) {
  const AnnotatedDocument& doc = ix.doc();
  BundleResult result;

  // SubRegion forest: drop back edges found by a DFS in mention order.
  std::map<std::string, std::vector<std::string>, std::less<>> children;
  for (const auto& e : doc.entities) {
    if (e.kind != EntityKind::Anatomical && e.kind != EntityKind::Disease) continue;
    for (const Relation* r : ix.outgoing(e.id)) {
      if (r->kind != RelationKind::SubRegion) continue;
      const Entity* t = ix.find(r->target);
      if (!t || t->kind == EntityKind::Timex3) continue;
      children[e.id].push_back(r->target);
    }
  }
  {
    std::map<std::string, int, std::less<>> color;  // 0 new, 1 active, 2 done
    std::function<void(const std::string&)> visit = [&](const std::string& id) {
      color[id] = 1;
      auto it = children.find(id);
      if (it != children.end()) {
        auto& kids = it->second;
        for (std::size_t i = 0; i < kids.size();) {
          int c = color[kids[i]];
          if (c == 1) {
            result.diagnostics.push_back(make_error(
                "subregion-cycle",
                "subRegion cycle through '" + kids[i] + "'; dropped " + id + " -> " + kids[i],
                static_cast<std::size_t>(std::max<std::int64_t>(0, ix.mention(id)))));
            kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(i));
            continue;
          }
          if (c == 0) visit(kids[i]);
          ++i;
        }
      }
      color[id] = 2;
    };
    for (const auto& e : doc.entities) {
      if (children.count(e.id) && color[e.id] == 0) visit(e.id);
    }
  }
  std::set<std::string, std::less<>> has_parent;
  for (const auto& [id, kids] : children)
    for (const auto& k : kids) has_parent.insert(k);

  std::map<std::string, std::size_t, std::less<>> bundle_of;  // entity -> bundle index
  std::vector<EntityBundle>& bundles = result.bundles;

  auto new_bundle = [&](const Entity& root) {
    EntityBundle b;
    b.root_id = root.id;
    b.kind = root.kind;
    b.label = root.surface;
    b.attribute = attribute_of(root);
    bundle_of[root.id] = bundles.size();
    bundles.push_back(std::move(b));
    return bundles.size() - 1;
  };

  // Values attached through keyValue; the first key by mention wins.
  std::map<std::string, std::string, std::less<>> value_key;
  std::map<std::string, std::string, std::less<>> key_value;
  for (const auto& e : doc.entities) {
    if (e.kind != EntityKind::TestKey && e.kind != EntityKind::MedKey) continue;
    if (has_parent.count(e.id)) continue;
    for (const Relation* r : ix.outgoing(e.id)) {
      if (r->kind != RelationKind::KeyValue) continue;
      const Entity* v = ix.find(r->target);
      if (!v || (v->kind != EntityKind::TestVal && v->kind != EntityKind::MedVal)) continue;
      if (has_parent.count(v->id)) continue;
      if (value_key.count(v->id)) {
        result.diagnostics.push_back(make_warning(
            "shared-value", "value '" + v->id + "' already belongs to key '" +
                                value_key[v->id] + "'", v->span.begin));
        continue;
      }
      if (key_value.count(e.id)) {
        result.diagnostics.push_back(make_warning(
            "multiple-values", "key '" + e.id + "' has several values; '" + v->id +
                                   "' is shown on its own", v->span.begin));
        continue;
      }
      key_value[e.id] = v->id;
      value_key[v->id] = e.id;
    }
  }

  // Supplemental candidates: features and changes with a subject.
  auto subject_of = [&](const Entity& e) -> std::optional<std::string> {
    RelationKind kind =
        e.kind == EntityKind::Feature ? RelationKind::FeatureSbj : RelationKind::ChangeSbj;
    std::optional<std::string> subject;
    for (const Relation* r : ix.outgoing(e.id)) {
      if (r->kind != kind || !ix.find(r->target)) continue;
      if (subject) {
        result.diagnostics.push_back(make_warning(
            "multiple-subjects", "'" + e.id + "' has several subjects; using '" + *subject + "'",
            e.span.begin));
        break;
      }
      subject = r->target;
    }
    return subject;
  };
  std::map<std::string, std::string, std::less<>> pending_subject;
  for (const auto& e : doc.entities) {
    if ((e.kind == EntityKind::Feature || e.kind == EntityKind::Change) &&
        !has_parent.count(e.id)) {
      if (auto s = subject_of(e)) pending_subject[e.id] = *s;
    }
  }

  // Primary bundles in mention order.
  for (const auto& e : doc.entities) {
    if (e.kind == EntityKind::Timex3 || has_parent.count(e.id) || value_key.count(e.id) ||
        pending_subject.count(e.id))
      continue;
    std::size_t idx = new_bundle(e);
    if (auto kv = key_value.find(e.id); kv != key_value.end()) {
      bundles[idx].key_value = kv->second;
      bundle_of[kv->second] = idx;
    }
    // Pre-order walk of the SubRegion closure.
    std::vector<std::pair<std::string, std::string>> stack;
    if (auto it = children.find(e.id); it != children.end()) {
      for (auto k = it->second.rbegin(); k != it->second.rend(); ++k)
        stack.emplace_back(*k, e.id);
    }
    while (!stack.empty()) {
      auto [id, parent] = stack.back();
      stack.pop_back();
      if (bundle_of.count(id)) {
        result.diagnostics.push_back(make_warning(
            "shared-subregion",
            "'" + id + "' is contained by more than one entity; kept under its first container",
            static_cast<std::size_t>(std::max<std::int64_t>(0, ix.mention(id)))));
        continue;
      }
      bundle_of[id] = idx;
      bundles[idx].contained_ids.push_back(id);
      bundles[idx].contained_parents.push_back(parent);
      if (auto it = children.find(id); it != children.end()) {
        for (auto k = it->second.rbegin(); k != it->second.rend(); ++k)
          stack.emplace_back(*k, id);
      }
    }
  }

  // Attach features and changes; chains resolve through earlier attachments.
  for (bool progress = true; progress && !pending_subject.empty();) {
    progress = false;
    for (const auto& e : doc.entities) {
      auto it = pending_subject.find(e.id);
      if (it == pending_subject.end()) continue;
      auto target = bundle_of.find(it->second);
      if (target == bundle_of.end()) continue;
      EntityBundle& b = bundles[target->second];
      if (e.kind == EntityKind::Feature) {
        b.features.push_back(e.id);
      } else {
        ChangeNote note{e.id, std::nullopt};
        for (const Relation* r : ix.outgoing(e.id)) {
          if (r->kind == RelationKind::ChangeRef && ix.find(r->target)) {
            note.ref_id = r->target;
            break;
          }
        }
        b.changes.push_back(std::move(note));
      }
      bundle_of[e.id] = target->second;
      pending_subject.erase(it);
      progress = true;
    }
  }
  // Unattachable supplements stand on their own.
  for (const auto& e : doc.entities) {
    if (!pending_subject.count(e.id)) continue;
    result.diagnostics.push_back(make_warning(
        "unattached-supplement",
        "'" + e.id + "' modifies an entity that is not on the timeline", e.span.begin));
    new_bundle(e);
  }

  auto by_mention = [&](const std::string& a, const std::string& b) {
    return ix.mention(a) < ix.mention(b);
  };
  for (auto& b : bundles) {
    std::stable_sort(b.features.begin(), b.features.end(), by_mention);
    std::stable_sort(b.changes.begin(), b.changes.end(),
                     [&](const ChangeNote& x, const ChangeNote& y) {
                       return ix.mention(x.change_id) < ix.mention(y.change_id);
                     });
  }
  std::stable_sort(bundles.begin(), bundles.end(), [&](const auto& a, const auto& b) {
    return by_mention(a.root_id, b.root_id);
  });

  for (auto& b : bundles) {
    for (const Relation* r : placing_relations(ix, b)) {
      if (ix.is_duration(r->target) &&
          std::find(b.durations.begin(), b.durations.end(), r->target) == b.durations.end())
        b.durations.push_back(r->target);
    }
  }
  return result;
}

ClusterResult clusters_with_index(const DocumentIndex& ix,
                                  const std::vector<EntityBundle>& bundles) {
  const AnnotatedDocument& doc = ix.doc();
  ClusterResult result;

  std::set<std::string, std::less<>> timex_ids;
  for (const auto& r : doc.relations) {
    if (!is_temporal(r.kind) || !ix.is_timex_target(r.target) || !ix.find(r.source)) continue;
    if (r.target != kDctId && !ix.is_duration(r.target)) timex_ids.insert(r.target);
    const Entity* s = ix.find(r.source);
    if (s->kind == EntityKind::Timex3 && !ix.is_duration(s->id)) timex_ids.insert(s->id);
  }

  TimeCluster dct;
  dct.cluster_id = cluster_id_for(kDctId);
  dct.anchor_timex_id = std::string(kDctId);
  dct.anchor_label = std::string(kDctId);
  dct.anchor = AbsoluteDate::of_day(doc.dct);
  dct.mention = -1;
  result.clusters.push_back(std::move(dct));
  for (const auto& e : doc.entities) {
    if (!timex_ids.count(e.id)) continue;
    TimeCluster c;
    c.cluster_id = cluster_id_for(e.id);
    c.anchor_timex_id = e.id;
    c.anchor_label = e.surface;
    c.anchor = ix.anchor(e.id);
    c.mention = static_cast<std::int64_t>(e.span.begin);
    result.clusters.push_back(std::move(c));
  }
  std::map<std::string, std::size_t, std::less<>> slot;
  for (std::size_t i = 0; i < result.clusters.size(); ++i)
    slot[result.clusters[i].anchor_timex_id] = i;

  static constexpr RelationKind kPriority[] = {RelationKind::TimeOn, RelationKind::TimeBegin,
                                               RelationKind::TimeEnd, RelationKind::TimeBefore,
                                               RelationKind::TimeAfter};
  for (const auto& b : bundles) {
    auto rels = placing_relations(ix, b);
    std::optional<std::size_t> chosen;
    for (RelationKind kind : kPriority) {
      for (const Relation* r : rels) {
        if (r->kind != kind) continue;
        auto it = slot.find(r->target);
        if (it == slot.end()) continue;
        if (!chosen) {
          chosen = it->second;
        } else if (kind == RelationKind::TimeOn && it->second != *chosen) {
          result.diagnostics.push_back(make_warning(
              "multiple-timeon",
              "'" + r->source + "' has several timeOn targets; '" + r->target +
                  "' is ignored in favour of the earliest-mentioned one",
              static_cast<std::size_t>(std::max<std::int64_t>(0, ix.mention(r->source)))));
        }
      }
      if (chosen) break;
    }
    result.clusters[chosen.value_or(0)].members.push_back(b.root_id);
  }
  return result;
}

struct EdgeRecord {
  std::size_t from = 0, to = 0;
  bool explicit_relation = false;
  std::int64_t source_mention = -1;
  std::int64_t target_mention = -1;
  RelationKind kind = RelationKind::TimeBefore;
  std::string relation;  // "t2 timeBefore t1" for explicit edges
  bool alive = true;
};

// Tarjan's strongly connected components; returns a component id per node.
std::vector<int> strongly_connected(std::size_t n, const std::vector<EdgeRecord>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : edges)
    if (e.alive) adj[e.from].push_back(e.to);
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0, comps = 0;
  std::function<void(std::size_t)> strong = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      for (;;) {
        std::size_t w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = comps;
        if (w == v) break;
      }
      ++comps;
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) strong(v);
  return comp;
}

}  // namespace

const EntityBundle* Timeline::find_bundle(std::string_view root_id) const {
  for (const auto& b : bundles)
    if (b.root_id == root_id) return &b;
  return nullptr;
}

const EntitySpan* Timeline::find_span(std::string_view root_id) const {
  for (const auto& s : spans)
    if (s.bundle_root_id == root_id) return &s;
  return nullptr;
}

BundleResult bundle_entities(const AnnotatedDocument& doc, const PatternTable& table) {
  return bundle_with_index(DocumentIndex(doc, table));
}

ClusterResult build_clusters(const AnnotatedDocument& doc,
                             const std::vector<EntityBundle>& bundles,
                             const PatternTable& table) {
  return clusters_with_index(DocumentIndex(doc, table), bundles);
}

std::vector<PrecedenceEdge> anchor_edges(const std::vector<TimeCluster>& clusters,
                                         const CalendarDate& dct) {
  std::vector<PrecedenceEdge> edges;
  for (const auto& a : clusters) {
    for (const auto& b : clusters) {
      if (&a == &b) continue;
      if (compare_anchors(a.anchor, b.anchor, dct) == AnchorOrder::Less)
        edges.push_back({a.cluster_id, b.cluster_id, false});
    }
  }
  return edges;
}

OrderResult order_clusters(const AnnotatedDocument& input, std::vector<TimeCluster> clusters) {
  AnnotatedDocument doc = input;
  canonicalize(doc);
  OrderResult result;
  const std::size_t n = clusters.size();
  std::map<std::string, std::size_t, std::less<>> slot;
  for (std::size_t i = 0; i < n; ++i) slot[clusters[i].anchor_timex_id] = i;
  std::map<std::string, std::int64_t, std::less<>> mention;
  for (const auto& e : doc.entities) mention[e.id] = static_cast<std::int64_t>(e.span.begin);
  auto mention_of = [&](const std::string& id) -> std::int64_t {
    auto it = mention.find(id);
    return it == mention.end() ? -1 : it->second;
  };

  std::vector<EdgeRecord> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j &&
          compare_anchors(clusters[i].anchor, clusters[j].anchor, doc.dct) == AnchorOrder::Less) {
        EdgeRecord edge;
        edge.from = i;
        edge.to = j;
        edges.push_back(std::move(edge));
      }
    }
  }
  for (const auto& r : doc.relations) {
    if (r.kind != RelationKind::TimeBefore && r.kind != RelationKind::TimeAfter) continue;
    auto s = slot.find(r.source);
    auto t = slot.find(r.target);
    if (s == slot.end() || t == slot.end() || s->second == t->second) continue;
    EdgeRecord e;
    e.explicit_relation = true;
    e.kind = r.kind;
    e.source_mention = mention_of(r.source);
    e.target_mention = r.target == kDctId ? -1 : mention_of(r.target);
    e.relation = r.source + " " + std::string(to_string(r.kind)) + " " + r.target;
    if (r.kind == RelationKind::TimeBefore) {
      e.from = s->second;
      e.to = t->second;
    } else {
      e.from = t->second;
      e.to = s->second;
    }
    edges.push_back(e);
  }

  for (;;) {
    auto comp = strongly_connected(n, edges);
    EdgeRecord* victim = nullptr;
    for (auto& e : edges) {
      if (!e.alive || !e.explicit_relation || comp[e.from] != comp[e.to]) continue;
      if (!victim || std::tie(e.source_mention, e.target_mention, e.kind) >
                         std::tie(victim->source_mention, victim->target_mention, victim->kind))
        victim = &e;
    }
    if (!victim) break;
    victim->alive = false;
    result.dropped.push_back({clusters[victim->from].cluster_id, clusters[victim->to].cluster_id,
                              true});
    result.diagnostics.push_back(make_warning(
        "cluster-cycle",
        "time relations form a cycle; dropped " + victim->relation,
        static_cast<std::size_t>(std::max<std::int64_t>(0, victim->source_mention))));
  }

  // Kahn's algorithm; the earliest-mentioned ready cluster goes next.
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<int> indegree(n, 0);
  for (const auto& e : edges) {
    if (!e.alive) continue;
    adj[e.from].push_back(e.to);
    ++indegree[e.to];
    result.edges.push_back(
        {clusters[e.from].cluster_id, clusters[e.to].cluster_id, e.explicit_relation});
  }
  using Key = std::tuple<std::int64_t, std::string, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.emplace(clusters[i].mention, clusters[i].cluster_id, i);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    auto [m, id, v] = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::size_t w : adj[v])
      if (--indegree[w] == 0) ready.emplace(clusters[w].mention, clusters[w].cluster_id, w);
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    clusters[order[k]].order_index = static_cast<int>(k);
    result.clusters.push_back(clusters[order[k]]);
  }
  return result;
}

namespace {

SpanResult spans_with_index(const DocumentIndex& ix, const std::vector<TimeCluster>& ordered,
                            const std::vector<EntityBundle>& bundles) {
  SpanResult result;
  std::map<std::string, int, std::less<>> index_of;
  std::map<std::string, int, std::less<>> member_index;
  int dct_index = 0;
  for (const auto& c : ordered) {
    index_of[c.anchor_timex_id] = c.order_index;
    if (c.anchor_timex_id == kDctId) dct_index = c.order_index;
    for (const auto& m : c.members) member_index[m] = c.order_index;
  }
  const int last = ordered.empty() ? 0 : static_cast<int>(ordered.size()) - 1;

  for (const auto& b : bundles) {
    auto rels = placing_relations(ix, b);
    auto first_of = [&](RelationKind kind) -> std::optional<int> {
      for (const Relation* r : rels) {
        if (r->kind != kind) continue;
        if (auto it = index_of.find(r->target); it != index_of.end()) return it->second;
      }
      return std::nullopt;
    };
    auto begin = first_of(RelationKind::TimeBegin);
    auto end = first_of(RelationKind::TimeEnd);
    auto on = first_of(RelationKind::TimeOn);
    auto before = first_of(RelationKind::TimeBefore);
    auto after = first_of(RelationKind::TimeAfter);

    EntitySpan span;
    span.bundle_root_id = b.root_id;
    if (begin && end) {
      span.begin_cluster = *begin;
      span.end_cluster = *end;
      if (*begin > *end) {
        result.diagnostics.push_back(make_warning(
            "inverted-span",
            "'" + b.root_id + "' ends before it begins; collapsed to its begin point",
            static_cast<std::size_t>(std::max<std::int64_t>(0, ix.mention(b.root_id)))));
        span.end_cluster = *begin;
      }
    } else if (begin) {
      span.begin_cluster = *begin;
      span.end_cluster = last;
      span.open_end = true;
    } else if (end) {
      span.begin_cluster = span.end_cluster = *end;
      span.open_start = true;
    } else if (on) {
      span.begin_cluster = span.end_cluster = *on;
    } else if (before) {
      span.begin_cluster = span.end_cluster = std::max(*before - 1, 0);
      span.open_start = true;
    } else if (after) {
      span.begin_cluster = span.end_cluster = std::min(*after + 1, last);
      span.open_end = true;
    } else {
      auto it = member_index.find(b.root_id);
      span.begin_cluster = span.end_cluster = it == member_index.end() ? dct_index : it->second;
    }
    result.spans.push_back(std::move(span));
  }
  return result;
}

}  // namespace

SpanResult infer_spans(const AnnotatedDocument& doc, const std::vector<TimeCluster>& ordered,
                       const std::vector<EntityBundle>& bundles, const PatternTable& table) {
  return spans_with_index(DocumentIndex(doc, table), ordered, bundles);
}

Timeline build_timeline(const AnnotatedDocument& doc, const PatternTable& table) {
  DocumentIndex ix(doc, table);
  Timeline tl;
  tl.doc_id = doc.doc_id;
  tl.dct = doc.dct;
  auto append = [&](Diagnostics&& d) {
    for (auto& x : d) tl.diagnostics.push_back(std::move(x));
  };
  append(validate_document(doc));
  auto bundles = bundle_with_index(ix);
  append(std::move(bundles.diagnostics));
  auto clusters = clusters_with_index(ix, bundles.bundles);
  append(std::move(clusters.diagnostics));
  auto ordered = order_clusters(ix.doc(), std::move(clusters.clusters));
  append(std::move(ordered.diagnostics));
  auto spans = spans_with_index(ix, ordered.clusters, bundles.bundles);
  append(std::move(spans.diagnostics));
  tl.clusters = std::move(ordered.clusters);
  tl.bundles = std::move(bundles.bundles);
  tl.spans = std::move(spans.spans);
  return tl;
}

nlohmann::json diagnostics_to_json(const Diagnostics& diagnostics) {
  auto out = nlohmann::json::array();
  for (const auto& d : diagnostics) {
    nlohmann::json j = {{"severity", to_string(d.severity)}, {"code", d.code},
                        {"message", d.message}};
    if (d.location) j["location"] = *d.location;
    out.push_back(std::move(j));
  }
  return out;
}

nlohmann::json timeline_to_json_value(const Timeline& tl) {
  using nlohmann::json;
  json clusters = json::array();
  for (const auto& c : tl.clusters) {
    json j = {{"clusterId", c.cluster_id},
              {"anchorTimexId", c.anchor_timex_id},
              {"anchorLabel", c.anchor_label}};
    if (auto abs = resolve(c.anchor, tl.dct)) j["resolvedDate"] = format_absolute(*abs);
    j["orderIndex"] = c.order_index;
    j["members"] = c.members;
    clusters.push_back(std::move(j));
  }
  json bundles = json::array();
  for (const auto& b : tl.bundles) {
    json j = {{"rootId", b.root_id}, {"kind", to_string(b.kind)}, {"label", b.label}};
    if (b.attribute) j["attribute"] = *b.attribute;
    json contained = json::array();
    for (std::size_t i = 0; i < b.contained_ids.size(); ++i)
      contained.push_back({{"id", b.contained_ids[i]}, {"parentId", b.contained_parents[i]}});
    j["containedIds"] = b.contained_ids;
    j["containment"] = std::move(contained);
    j["features"] = b.features;
    json changes = json::array();
    for (const auto& ch : b.changes) {
      json cj = {{"changeId", ch.change_id}};
      if (ch.ref_id) cj["refId"] = *ch.ref_id;
      changes.push_back(std::move(cj));
    }
    j["changes"] = std::move(changes);
    if (b.key_value) j["keyValue"] = *b.key_value;
    j["durations"] = b.durations;
    bundles.push_back(std::move(j));
  }
  json spans = json::array();
  for (const auto& s : tl.spans) {
    spans.push_back({{"bundleRootId", s.bundle_root_id},
                     {"beginCluster", s.begin_cluster},
                     {"endCluster", s.end_cluster},
                     {"openStart", s.open_start},
                     {"openEnd", s.open_end}});
  }
  return {{"schema", kTimelineSchema}, {"docId", tl.doc_id},
          {"dct", format_iso_date(tl.dct)}, {"clusters", std::move(clusters)},
          {"bundles", std::move(bundles)}, {"spans", std::move(spans)},
          {"diagnostics", diagnostics_to_json(tl.diagnostics)}};
}

std::string timeline_to_json(const Timeline& tl) {
  return timeline_to_json_value(tl).dump(2) + "\n";
}

}  // namespace heart
