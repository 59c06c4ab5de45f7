// Copyright 2026 The Botshaper Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <functional>
#include <random>
#include <thread>

#include <httplib.h>

#include "botshaper/concepts.hpp"
#include "fixtures.hpp"

namespace botshaper {
namespace {

using testing::data_path;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

std::shared_ptr<const ConceptSource> bundled() {
  static const auto src = std::make_shared<SnapshotSource>(load_snapshot_file(data_path("concepts.tsv")));
  return src;
}

const AttributeDefinition& fear() { return testing::offline_runtime().registry->at("biggest_fear"); }

std::vector<std::string> labels(const std::vector<ConceptEdge>& edges) {
  std::vector<std::string> out;
  for (const auto& e : edges) out.push_back(e.start_label);
  return out;
}

// Counts queries so tests can observe caching.
class CountingSource final : public ConceptSource {
 public:
  explicit CountingSource(std::shared_ptr<const ConceptSource> inner) : inner_(std::move(inner)) {}
  std::vector<ConceptEdge> query(const std::string& node, std::size_t limit) const override {
    ++calls;
    return inner_->query(node, limit);
  }
  mutable std::atomic<int> calls{0};

 private:
  std::shared_ptr<const ConceptSource> inner_;
};

class DownSource final : public ConceptSource {
 public:
  std::vector<ConceptEdge> query(const std::string&, std::size_t) const override {
    throw Error(ErrorCode::SourceUnavailable, "down");
  }
};

TEST(CleanLabel, StripsArticlesAndUnderscores) {
  EXPECT_EQ(clean_label("a_zombie"), "zombie");
  EXPECT_EQ(clean_label("an elephant"), "elephant");
  EXPECT_EQ(clean_label("the dark"), "dark");
  EXPECT_EQ(clean_label("physical_examination"), "physical examination");
  EXPECT_EQ(clean_label("theater"), "theater");
}

TEST(Snapshot, BundledFearNodeHasFigureValues) {
  ConceptSuggester s(bundled());
  const auto found = labels(s.fetch_instances("fear", 10));
  EXPECT_NE(std::find(found.begin(), found.end(), "physical examination"), found.end());
  EXPECT_NE(std::find(found.begin(), found.end(), "zombie"), found.end());
}

TEST(Snapshot, LimitTruncatesInStoredOrder) {
  ConceptSuggester s(bundled());
  const auto one = s.fetch_instances("fear", 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].start_label, "physical examination");
  EXPECT_EQ(one[0].relation, "IsA");
}

TEST(Snapshot, EverySuggestibleAttributeHasEdges) {
  const auto& snap = std::static_pointer_cast<const SnapshotSource>(bundled())->snapshot();
  for (const auto& def : testing::offline_runtime().registry->entries()) {
    if (def.suggestible()) EXPECT_FALSE(snap.edges(*def.concept_node).empty()) << def.id.str();
  }
  EXPECT_EQ(snap.version(), "2026-01");
}

TEST(Snapshot, ParseErrors) {
  EXPECT_EQ(code_of([] { load_snapshot("fear\tzombie\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { load_snapshot("fear\tzombie\theavy\n"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { load_snapshot_file("/nonexistent.tsv"); }), ErrorCode::ParseError);
}

TEST(Fetch, Preconditions) {
  ConceptSuggester s(bundled());
  EXPECT_EQ(code_of([&] { s.fetch_instances("", 5); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { s.fetch_instances("fear", 0); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { s.fetch_instances("unobtainium", 5); }), ErrorCode::NoEdges);
}

TEST(Fetch, CachesPerNodeAndLimit) {
  auto counting = std::make_shared<CountingSource>(bundled());
  ConceptSuggester s(counting);
  s.fetch_instances("fear", 5);
  s.fetch_instances("fear", 5);
  EXPECT_EQ(counting->calls, 1);
  s.fetch_instances("fear", 6);
  EXPECT_EQ(counting->calls, 2);
}

TEST(Suggest, SkipsRejectedValue) {
  auto two = std::make_shared<SnapshotSource>(load_snapshot("fear\tphysical examination\t2\nfear\tzombie\t1\n"));
  ConceptSuggester s(two);
  Character c;
  c.reject("biggest_fear", "physical examination");
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SeededRng rng(seed);
    EXPECT_EQ(s.suggest_value(fear(), c, rng), "zombie");
  }
}

TEST(Suggest, NotSuggestibleAndExhausted) {
  auto two = std::make_shared<SnapshotSource>(load_snapshot("fear\tphysical examination\t2\nfear\tzombie\t1\n"));
  ConceptSuggester s(two);
  SeededRng rng(3);
  EXPECT_EQ(code_of([&] { s.suggest_value(testing::offline_runtime().registry->at("name"), {}, rng); }),
            ErrorCode::NotSuggestible);
  Character c;
  c.reject("biggest_fear", "physical examination");
  c.put({AttributeId("biggest_fear"), "zombie", ValueSource::user_typed, 1});
  EXPECT_EQ(code_of([&] { s.suggest_value(fear(), c, rng); }), ErrorCode::Exhausted);
  EXPECT_EQ(rng.state(), 3u);
}

TEST(Suggest, SourceFailurePropagates) {
  ConceptSuggester s(std::make_shared<DownSource>());
  SeededRng rng(1);
  EXPECT_EQ(code_of([&] { s.suggest_value(fear(), {}, rng); }), ErrorCode::SourceUnavailable);
}

TEST(Fallback, UsesSecondarySourceWhenPrimaryIsDown) {
  FallbackSource f(std::make_shared<DownSource>(), bundled());
  EXPECT_EQ(labels(f.query("fear", 2)), (std::vector<std::string>{"physical examination", "zombie"}));
}

// Property: whatever was rejected, a suggestion is never rejected or current.
TEST(SuggestProperty, NeverRepeatsRejectedOrCurrent) {
  ConceptSuggester s(bundled());
  std::mt19937_64 gen(11);
  const auto& registry = *testing::offline_runtime().registry;
  for (int trial = 0; trial < 300; ++trial) {
    const auto& def = registry.entries()[gen() % registry.size()];
    if (!def.suggestible()) continue;
    const auto all = labels(s.fetch_instances(*def.concept_node, s.fetch_limit()));
    Character c;
    for (const auto& l : all) {
      if (gen() % 2) c.reject(def.id.str(), l);
    }
    if (gen() % 2) c.put({def.id, all[gen() % all.size()], ValueSource::user_typed, 1});
    SeededRng rng(gen());
    try {
      const auto v = s.suggest_value(def, c, rng);
      EXPECT_EQ(c.rejected_for(def.id.str()).count(v), 0u);
      EXPECT_TRUE(!c.find(def.id.str()) || c.find(def.id.str())->value != v);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Exhausted);
    }
  }
}

// A canned ConceptNet-style server on a loopback port.
class CassetteServer {
 public:
  CassetteServer() {
    server_.Get("/query", [this](const httplib::Request& req, httplib::Response& res) {
      last_target = req.target;
      ++hits;
      if (fail_first > 0) {
        --fail_first;
        res.status = 503;
        return;
      }
      res.set_content(R"({"edges":[
        {"rel":{"@id":"/r/IsA","label":"IsA"},"start":{"@id":"/c/en/zombie","label":"a zombie"},"weight":3.1},
        {"rel":{"@id":"/r/IsA","label":"IsA"},"start":{"@id":"/c/fr/peur","label":"peur"},"weight":2.0},
        {"rel":{"@id":"/r/RelatedTo","label":"RelatedTo"},"start":{"@id":"/c/en/dread","label":"dread"},"weight":2.0},
        {"rel":{"@id":"/r/IsA","label":"IsA"},"start":{"@id":"/c/en/spider","label":"spider"},"weight":1.5}
      ]})",
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~CassetteServer() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::atomic<int> hits{0};
  std::atomic<int> fail_first{0};
  std::string last_target;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(HttpSource, QueriesIsAEdgesAndFiltersForeignAndOtherRelations) {
  CassetteServer server;
  HttpConceptSource src(server.url());
  const auto edges = src.query("fear", 10);
  EXPECT_EQ(labels(edges), (std::vector<std::string>{"zombie", "spider"}));
  EXPECT_EQ(server.last_target, "/query?end=/c/en/fear&rel=/r/IsA&limit=10");
  EXPECT_EQ(edges[0].end_node, "fear");
  EXPECT_DOUBLE_EQ(edges[0].weight, 3.1);
}

TEST(HttpSource, RetriesOnceOn5xx) {
  CassetteServer server;
  server.fail_first = 1;
  HttpConceptSource src(server.url());
  EXPECT_EQ(src.query("fear", 1).size(), 1u);
  EXPECT_EQ(server.hits, 2);

  server.fail_first = 2;
  server.hits = 0;
  EXPECT_EQ(code_of([&] { src.query("fear", 1); }), ErrorCode::SourceUnavailable);
  EXPECT_EQ(server.hits, 2);
}

TEST(HttpSource, UnreachableServiceFallsBackToSnapshot) {
  // port 9 on loopback: nothing listens there
  auto live = std::make_shared<HttpConceptSource>("http://127.0.0.1:9", std::chrono::milliseconds(300));
  EXPECT_EQ(code_of([&] { live->query("fear", 3); }), ErrorCode::SourceUnavailable);
  FallbackSource f(live, bundled());
  EXPECT_EQ(f.query("fear", 1)[0].start_label, "physical examination");
}

TEST(HttpSource, MalformedBodyIsSourceUnavailable) {
  EXPECT_EQ(code_of([] { parse_conceptnet_response("{not json", "fear", 5); }), ErrorCode::SourceUnavailable);
  EXPECT_EQ(code_of([] { parse_conceptnet_response("{}", "fear", 5); }), ErrorCode::SourceUnavailable);
}

}  // namespace
}  // namespace botshaper
