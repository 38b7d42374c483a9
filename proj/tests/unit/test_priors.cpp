#include <doctest.h>

#include <cmath>

#include "roomnav/priors.hpp"
#include "test_support.hpp"

using namespace roomnav;
using namespace roomnav::testing;

namespace {

// 64x64 house with no outside ring: the canonical frame maps one-to-one
SemanticGrid frame_sized_house() {
    GridBuilder b(kCanonicalFrame, kCanonicalFrame);
    b.room(RoomType::Kitchen, 0, 0, 7, 7);
    b.room(RoomType::DiningRoom, 8, 0, 15, 7);
    b.rect(30, 30, 40, 30, CellLabel::wall());
    return b.build();
}

}  // namespace

TEST_CASE("single-house corpus reproduces the indicator fields") {
    const SemanticGrid g = frame_sized_house();
    const PriorModel m = PriorModel::train({g}, 1.0);
    CHECK(m.corpus_size() == 1);
    for (int v = 0; v < kCanonicalFrame; ++v) {
        for (int u = 0; u < kCanonicalFrame; ++u) {
            const double want_k = g.label(u, v).is_room() &&
                    g.rooms()[g.label(u, v).room_instance()].type == RoomType::Kitchen
                ? 1.0 : 0.0;
            CHECK(m.field_room(RoomType::Kitchen, u, v) == want_k);
            CHECK(m.field_outside(u, v) == 0.0);
        }
    }
}

TEST_CASE("aligned field sums give the average room area fraction") {
    Rng rng(3);
    const std::vector<SemanticGrid> corpus = planted_corpus(40, 1.0, rng);
    const PriorModel m = PriorModel::train(corpus, 1.0);

    double field_sum = 0.0;
    for (int v = 0; v < kCanonicalFrame; ++v) {
        for (int u = 0; u < kCanonicalFrame; ++u) {
            field_sum += m.field_room(RoomType::Kitchen, u, v);
        }
    }
    // kitchen covers 64 of the 40x32 footprint cells in every house
    const double area_fraction = 64.0 / (40.0 * 32.0);
    CHECK(field_sum / (kCanonicalFrame * kCanonicalFrame) ==
          doctest::Approx(area_fraction).epsilon(0.02));
}

TEST_CASE("dining field concentrates east of the kitchen anchor") {
    Rng rng(5);
    const std::vector<SemanticGrid> corpus = planted_corpus(30, 1.0, rng);
    const PriorModel m = PriorModel::train(corpus, 1.0);
    // the planted dining block maps to canonical columns 6..12
    CHECK(m.field_room(RoomType::DiningRoom, 7, 0) == 1.0);
    CHECK(m.field_room(RoomType::DiningRoom, 7, 31) == 1.0);
    CHECK(m.field_room(RoomType::DiningRoom, 0, 0) == 0.0);
    CHECK(m.field_room(RoomType::DiningRoom, 40, 0) == 0.0);
}

TEST_CASE("houses without a kitchen are skipped with a count") {
    GridBuilder b(20, 20);
    b.room(RoomType::Bedroom, 2, 2, 7, 7);
    const SemanticGrid no_kitchen = b.build();
    const SemanticGrid with_kitchen = frame_sized_house();
    const AlignedCounts acc = align_and_accumulate({no_kitchen, with_kitchen});
    CHECK(acc.houses == 1);
    CHECK(acc.skipped == 1);

    CHECK_THROWS_AS(align_and_accumulate({}), DomainError);
    CHECK_THROWS_AS(align_and_accumulate({no_kitchen}), DomainError);
}

TEST_CASE("planted corpus: dining one meter east of kitchen") {
    Rng rng(7);
    const std::vector<SemanticGrid> corpus = planted_corpus(30, 1.0, rng);
    const PriorModel m = PriorModel::train(corpus, 1.0);

    const auto p = m.conditional3(RoomType::DiningRoom, full_label_of(RoomType::Kitchen),
                                  4, 0);  // +1m east
    CHECK(p[kClassInRoom] >= 0.95);
    // every kitchen cell pairs with a dining cell there: p = (64+1)/(64+3)
    CHECK(p[kClassInRoom] == doctest::Approx(65.0 / 67.0));
}

TEST_CASE("smoothing limit drives conditionals to uniform") {
    Rng rng(9);
    const std::vector<SemanticGrid> corpus = planted_corpus(10, 1.0, rng);
    const PriorModel m = PriorModel::train(corpus, 1e12);
    const auto p = m.conditional3(RoomType::DiningRoom, full_label_of(RoomType::Kitchen),
                                  4, 0);
    for (int j = 0; j < 3; ++j) CHECK(p[j] == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("zero offset pairs a cell with itself") {
    Rng rng(13);
    const std::vector<SemanticGrid> corpus = planted_corpus(5, 1.0, rng);
    const PriorModel m = PriorModel::train(corpus, 1.0);
    for (int l = 0; l < kFullLabelCount; ++l) {
        CHECK(m.pair_count(l, l, 0, 0) == m.label_total(l));
        for (int o = 0; o < kFullLabelCount; ++o) {
            if (o != l) CHECK(m.pair_count(l, o, 0, 0) == 0);
        }
    }
}

TEST_CASE("pair counts are mirror-symmetric") {
    Rng rng(15);
    const std::vector<SemanticGrid> corpus = planted_corpus(4, 0.5, rng);
    const PriorModel m = PriorModel::train(corpus, 1.0);
    Rng probe(99);
    for (int trial = 0; trial < 4000; ++trial) {
        const int l = static_cast<int>(probe.uniform_index(kFullLabelCount));
        const int o = static_cast<int>(probe.uniform_index(kFullLabelCount));
        const int dx = probe.uniform_int(-52, 52);
        const int dy = probe.uniform_int(-52, 52);
        CHECK(m.pair_count(l, o, dx, dy) == m.pair_count(o, l, -dx, -dy));
    }
}

TEST_CASE("conditional distributions are normalized") {
    Rng rng(21);
    const std::vector<SemanticGrid> corpus = planted_corpus(6, 0.7, rng);
    const PriorModel m = PriorModel::train(corpus, 1.0);
    Rng probe(1);
    for (int trial = 0; trial < 2000; ++trial) {
        const RoomType r = static_cast<RoomType>(probe.uniform_index(kRoomTypeCount));
        const int l = static_cast<int>(probe.uniform_index(kFullLabelCount));
        const int dx = probe.uniform_int(-52, 52);
        const int dy = probe.uniform_int(-52, 52);
        const auto p = m.conditional3(r, l, dx, dy);
        CHECK(std::abs(p[0] + p[1] + p[2] - 1.0) <= 1e-9);
        for (int j = 0; j < 3; ++j) {
            CHECK(p[j] >= 0.0);
            CHECK(p[j] <= 1.0);
        }
    }
    for (RoomType r : kAllRoomTypes) {
        const auto p = m.marginal3(r);
        CHECK(std::abs(p[0] + p[1] + p[2] - 1.0) <= 1e-9);
    }
}

TEST_CASE("duplicating the corpus leaves the model unchanged") {
    Rng rng(33);
    std::vector<SemanticGrid> corpus = planted_corpus(8, 0.6, rng);
    std::vector<SemanticGrid> doubled = corpus;
    doubled.insert(doubled.end(), corpus.begin(), corpus.end());

    const PriorModel a = PriorModel::train(corpus, 1.0);
    const PriorModel b = PriorModel::train(doubled, 1.0);

    for (int v = 0; v < kCanonicalFrame; v += 3) {
        for (int u = 0; u < kCanonicalFrame; u += 3) {
            CHECK(a.field_outside(u, v) == b.field_outside(u, v));
            CHECK(a.field_room(RoomType::Kitchen, u, v) ==
                  b.field_room(RoomType::Kitchen, u, v));
        }
    }
    Rng probe(2);
    for (int trial = 0; trial < 500; ++trial) {
        const RoomType r = static_cast<RoomType>(probe.uniform_index(kRoomTypeCount));
        const int l = static_cast<int>(probe.uniform_index(kFullLabelCount));
        const int dx = probe.uniform_int(-52, 52);
        const int dy = probe.uniform_int(-52, 52);
        const auto pa = a.conditional3(r, l, dx, dy);
        const auto pb = b.conditional3(r, l, dx, dy);
        for (int j = 0; j < 3; ++j) CHECK(pa[j] == pb[j]);
    }
    for (RoomType r : kAllRoomTypes) {
        CHECK(a.marginal3(r) == b.marginal3(r));
    }
}

TEST_CASE("planted adjacency probability is recovered") {
    for (const double p : {0.3, 0.7, 1.0}) {
        Rng rng(static_cast<std::uint64_t>(p * 1000));
        const std::vector<SemanticGrid> corpus = planted_corpus(300, p, rng);
        const PriorModel m = PriorModel::train(corpus, 1.0);
        const auto cond = m.conditional3(RoomType::DiningRoom,
                                         full_label_of(RoomType::Kitchen), 4, 0);
        CHECK(std::abs(cond[kClassInRoom] - p) <= 0.05);
    }
}

TEST_CASE("model serialization round-trips exactly") {
    Rng rng(44);
    const std::vector<SemanticGrid> corpus = planted_corpus(6, 0.5, rng);
    const PriorModel m = PriorModel::train(corpus, 0.5);
    const std::string doc = m.serialize();
    const PriorModel back = PriorModel::deserialize(doc);

    CHECK(back.alpha() == m.alpha());
    CHECK(back.corpus_size() == m.corpus_size());
    CHECK(back.window_radius_cells() == m.window_radius_cells());
    CHECK(back.resolution() == m.resolution());
    Rng probe(3);
    for (int trial = 0; trial < 500; ++trial) {
        const RoomType r = static_cast<RoomType>(probe.uniform_index(kRoomTypeCount));
        const int l = static_cast<int>(probe.uniform_index(kFullLabelCount));
        const int dx = probe.uniform_int(-52, 52);
        const int dy = probe.uniform_int(-52, 52);
        CHECK(back.conditional3(r, l, dx, dy) == m.conditional3(r, l, dx, dy));
    }
    for (int v = 0; v < kCanonicalFrame; v += 5) {
        for (int u = 0; u < kCanonicalFrame; u += 5) {
            CHECK(back.field_outside(u, v) == m.field_outside(u, v));
        }
    }
    CHECK(back.serialize() == doc);

    SUBCASE("truncated file") {
        CHECK_THROWS_AS(PriorModel::deserialize(doc.substr(0, doc.size() / 3)), ParseError);
    }
    SUBCASE("version mismatch") {
        std::string bad = doc;
        bad.replace(bad.find("roomnav-prior 1"), 15, "roomnav-prior 9");
        CHECK_THROWS_AS(PriorModel::deserialize(bad), ParseError);
    }
}

TEST_CASE("uniform model basics") {
    const PriorModel m;
    CHECK(m.is_uniform());
    const auto p = m.conditional3(RoomType::Kitchen, kLabelHall, 2, 1);
    for (int j = 0; j < 3; ++j) CHECK(p[j] == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(PriorModel::train({}, 1.0), DomainError);
    CHECK_THROWS_AS(PriorModel::train({frame_sized_house()}, 0.0), DomainError);
}

TEST_CASE("corpus resolutions must agree") {
    const SemanticGrid a = frame_sized_house();
    const SemanticGrid b = open_grid(10, 10, 0.5);
    CHECK_THROWS_AS(train_cooccurrence({a, b}), DomainError);
}
