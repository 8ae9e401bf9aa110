#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "sonn/dataset.hpp"
#include "test_support.hpp"

using namespace sonn;
using testing_support::TempDir;
using testing_support::vec;
using testing_support::write_file;

namespace {

std::string csv_two_trajectories() {
    std::string text = "trajectory_id,j1,j2,j3,j4,j5,j6\n";
    for (int t = 0; t < 2; ++t) {
        for (int i = 0; i < 10; ++i) {
            text += "traj" + std::to_string(t);
            for (int j = 0; j < 6; ++j) text += "," + std::to_string(t * 100 + i + j * 0.5);
            text += "\n";
        }
    }
    return text;
}

Dataset random_dataset(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Dataset d;
    for (int t = 0; t < 3; ++t) {
        Trajectory tr{"r" + std::to_string(t), {}, TrajectorySource::file};
        for (int i = 0; i < 7; ++i) tr.samples.push_back(oracle::random_vector(rng, 6, -180, 180));
        d.trajectories.push_back(tr);
    }
    return d;
}

}  // namespace

TEST(LoadDataset, GroupsRowsByTrajectoryId) {
    TempDir dir;
    write_file(dir / "d.csv", csv_two_trajectories());
    const auto d = load_dataset(dir / "d.csv", DatasetFormat::csv);
    ASSERT_EQ(d.trajectories.size(), 2u);
    EXPECT_EQ(d.trajectories[0].id, "traj0");
    EXPECT_EQ(d.trajectories[1].id, "traj1");
    EXPECT_EQ(d.trajectories[0].samples.size(), 10u);
    EXPECT_EQ(d.trajectories[1].samples.size(), 10u);
    EXPECT_EQ(d.trajectories[1].samples[3][0], 103.0);
    EXPECT_EQ(d.trajectories[1].samples[3][5], 105.5);
}

TEST(LoadDataset, InterleavedRowsKeepPerIdOrder) {
    TempDir dir;
    write_file(dir / "d.csv", "a,1,0,0,0,0,0\nb,5,0,0,0,0,0\na,2,0,0,0,0,0\nb,6,0,0,0,0,0\n");
    const auto d = load_dataset(dir / "d.csv", DatasetFormat::csv);
    ASSERT_EQ(d.trajectories.size(), 2u);
    EXPECT_EQ(d.trajectories[0].samples[0][0], 1.0);
    EXPECT_EQ(d.trajectories[0].samples[1][0], 2.0);
    EXPECT_EQ(d.trajectories[1].samples[1][0], 6.0);
}

TEST(LoadDataset, FiveAnglesIsDimensionError) {
    TempDir dir;
    write_file(dir / "d.csv", "t1,0,0,0,0,0,0\nt1,0,0,0,0,0\n");
    EXPECT_THROW(load_dataset(dir / "d.csv", DatasetFormat::csv), DimensionError);
}

TEST(LoadDataset, EmptyFileIsEmptyDatasetError) {
    TempDir dir;
    write_file(dir / "d.csv", "");
    EXPECT_THROW(load_dataset(dir / "d.csv", DatasetFormat::csv), EmptyDatasetError);
    write_file(dir / "h.csv", "trajectory_id,j1,j2,j3,j4,j5,j6\n# nothing\n");
    EXPECT_THROW(load_dataset(dir / "h.csv", DatasetFormat::csv), EmptyDatasetError);
}

TEST(LoadDataset, MalformedNumberReportsLine) {
    TempDir dir;
    write_file(dir / "d.csv", "t1,0,0,0,0,0,0\n# comment\nt1,0,0,abc,0,0,0\n");
    try {
        load_dataset(dir / "d.csv", DatasetFormat::csv);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(LoadDataset, SingleSampleTrajectoryRejected) {
    TempDir dir;
    write_file(dir / "d.csv", "t1,0,0,0,0,0,0\nt1,1,0,0,0,0,0\nt2,0,0,0,0,0,0\n");
    EXPECT_THROW(load_dataset(dir / "d.csv", DatasetFormat::csv), DatasetError);
}

TEST(LoadDataset, NonFiniteRejected) {
    TempDir dir;
    write_file(dir / "d.csv", "t1,0,0,0,0,0,0\nt1,nan,0,0,0,0,0\n");
    EXPECT_THROW(load_dataset(dir / "d.csv", DatasetFormat::csv), ParseError);
}

TEST(LoadDataset, JsonFormat) {
    TempDir dir;
    write_file(dir / "d.json",
               R"({"trajectories": [{"id": "x", "samples": [[0,1,2,3,4,5],[6,7,8,9,10,11]]}]})");
    const auto d = load_dataset(dir / "d.json", DatasetFormat::json);
    ASSERT_EQ(d.trajectories.size(), 1u);
    EXPECT_EQ(d.trajectories[0].samples[1][5], 11.0);
    write_file(dir / "bad.json", R"({"trajectories": [{"id": "x", "samples": [[0,1,2,3,4]]}]})");
    EXPECT_THROW(load_dataset(dir / "bad.json", DatasetFormat::json), DimensionError);
    write_file(dir / "broken.json", "{");
    EXPECT_THROW(load_dataset(dir / "broken.json", DatasetFormat::json), ParseError);
}

TEST(LoadDataset, FormatFromExtension) {
    EXPECT_EQ(dataset_format_for("a/b.json"), DatasetFormat::json);
    EXPECT_EQ(dataset_format_for("a/b.csv"), DatasetFormat::csv);
    EXPECT_THROW(dataset_format_from_string("xml"), ConfigError);
}

TEST(SaveDataset, CsvAndJsonRoundTripBitExact) {
    TempDir dir;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto d = random_dataset(seed);
        for (const auto fmt : {DatasetFormat::csv, DatasetFormat::json}) {
            const auto path = dir / (fmt == DatasetFormat::csv ? "d.csv" : "d.json");
            save_dataset(d, path, fmt);
            const auto back = load_dataset(path, fmt);
            ASSERT_EQ(back.trajectories.size(), d.trajectories.size());
            for (std::size_t t = 0; t < d.trajectories.size(); ++t) {
                EXPECT_EQ(back.trajectories[t].id, d.trajectories[t].id);
                ASSERT_EQ(back.trajectories[t].samples.size(), d.trajectories[t].samples.size());
                for (std::size_t i = 0; i < d.trajectories[t].samples.size(); ++i) {
                    EXPECT_EQ(back.trajectories[t].samples[i], d.trajectories[t].samples[i]);
                }
            }
        }
    }
}

TEST(SaveDataset, UnwritableIdRejected) {
    TempDir dir;
    auto d = random_dataset(1);
    d.trajectories[0].id = "a,b";
    EXPECT_THROW(save_dataset(d, dir / "d.csv", DatasetFormat::csv), DatasetError);
}

TEST(Interpolate, OneRoundInsertsMidpoint) {
    Trajectory t{"t", {Vector::Zero(6), Vector::Constant(6, 10.0)}, TrajectorySource::file};
    const auto out = interpolate(t, 1);
    ASSERT_EQ(out.samples.size(), 3u);
    EXPECT_EQ(out.samples[1], Vector::Constant(6, 5.0));
    EXPECT_EQ(out.source, TrajectorySource::interpolated);
    EXPECT_EQ(interpolate(t, 0).source, TrajectorySource::file);
}

TEST(Interpolate, LengthFormula) {
    Trajectory t{"t", {}, TrajectorySource::file};
    for (int i = 0; i < 100; ++i) t.samples.push_back(Vector::Constant(6, i));
    EXPECT_EQ(interpolate(t, 2).samples.size(), 397u);
    EXPECT_EQ(interpolate(t, 4).samples.size(), 1585u);
    EXPECT_THROW(interpolate(t, -1), ConfigError);
}

TEST(Interpolate, OrderPreservingAndHalvesSteps) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        Trajectory t{"t", {}, TrajectorySource::file};
        for (int i = 0; i < 12; ++i) t.samples.push_back(oracle::random_vector(rng, 6, -180, 180));
        for (int rounds = 0; rounds <= 3; ++rounds) {
            const auto out = interpolate(t, rounds);
            const std::size_t stride = std::size_t{1} << rounds;
            ASSERT_EQ(out.samples.size(), (t.samples.size() - 1) * stride + 1);
            for (std::size_t i = 0; i < t.samples.size(); ++i) EXPECT_EQ(out.samples[i * stride], t.samples[i]);
            double max_in = 0.0, max_out = 0.0;
            for (std::size_t i = 0; i + 1 < t.samples.size(); ++i) {
                max_in = std::max(max_in, chebyshev(t.samples[i], t.samples[i + 1]));
            }
            for (std::size_t i = 0; i + 1 < out.samples.size(); ++i) {
                max_out = std::max(max_out, chebyshev(out.samples[i], out.samples[i + 1]));
            }
            EXPECT_LE(max_out, max_in / static_cast<double>(stride) + 1e-9);
        }
    }
}

TEST(GenerateSynthetic, ShapeAndDeterminism) {
    SyntheticSpec spec;
    const auto a = generate_synthetic(spec, 7);
    const auto b = generate_synthetic(spec, 7);
    ASSERT_EQ(a.trajectories.size(), 15u);
    for (std::size_t t = 0; t < 15; ++t) {
        ASSERT_EQ(a.trajectories[t].samples.size(), 50u);
        EXPECT_EQ(a.trajectories[t].source, TrajectorySource::synthetic);
        for (std::size_t i = 0; i < 50; ++i) EXPECT_EQ(a.trajectories[t].samples[i], b.trajectories[t].samples[i]);
    }
}

TEST(GenerateSynthetic, SamplesStayInsideBox) {
    SyntheticSpec spec;
    spec.lower = Vector::Constant(6, -90.0);
    spec.upper = Vector::Constant(6, 45.0);
    spec.bend = 0.5;
    const auto d = generate_synthetic(spec, 3);
    d.for_each_sample([&](const Vector& x) {
        EXPECT_GE(x.minCoeff(), -90.0);
        EXPECT_LE(x.maxCoeff(), 45.0);
    });
    const auto wide = generate_synthetic(SyntheticSpec{}, 3);
    wide.for_each_sample([&](const Vector& x) {
        EXPECT_GE(x.minCoeff(), -180.0);
        EXPECT_LE(x.maxCoeff(), 180.0);
    });
}

TEST(GenerateSynthetic, SeedsDiffer) {
    const auto a = generate_synthetic(SyntheticSpec{}, 7);
    const auto b = generate_synthetic(SyntheticSpec{}, 8);
    EXPECT_NE(a.trajectories[0].samples[0], b.trajectories[0].samples[0]);
}

TEST(GenerateSynthetic, NonPositiveCountsRejected) {
    SyntheticSpec spec;
    spec.trajectories = 0;
    EXPECT_THROW(generate_synthetic(spec, 1), ConfigError);
    spec.trajectories = 2;
    spec.samples = 1;
    EXPECT_THROW(generate_synthetic(spec, 1), ConfigError);
}

TEST(GenerateSynthetic, TrajectoriesAreSmooth) {
    // Bezier sampling: adjacent steps change by at most the control polygon
    // length times 3 / (samples - 1).
    const auto d = generate_synthetic(SyntheticSpec{}, 11);
    for (const auto& t : d.trajectories) {
        for (std::size_t i = 0; i + 1 < t.samples.size(); ++i) {
            EXPECT_LT(chebyshev(t.samples[i], t.samples[i + 1]), 3.0 * 3.0 * 360.0 / 49.0);
        }
    }
}

TEST(GenerateSynthetic, TableGridEndpointsNearGridPositions) {
    SyntheticSpec spec;
    spec.trajectories = 6;
    TableGrid grid;
    grid.arm = load_arm_model(std::filesystem::path(SONN_DATA_DIR) / "ur3.json");
    grid.rows = 2;
    grid.cols = 2;
    spec.table = grid;
    const auto d = generate_synthetic(spec, 5);
    const auto again = generate_synthetic(spec, 5);
    std::vector<Eigen::Vector3d> targets;
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) targets.push_back(grid.origin + Eigen::Vector3d(r * 0.05, c * 0.05, 0.05));
    for (std::size_t t = 0; t < d.trajectories.size(); ++t) {
        for (const auto* q : {&d.trajectories[t].samples.front(), &d.trajectories[t].samples.back()}) {
            const auto p = fk(grid.arm, *q).position;
            double best = 1e9;
            for (const auto& g : targets) best = std::min(best, (p - g).norm());
            EXPECT_LT(best, 0.1);  // best of 4000 random configurations
        }
        EXPECT_EQ(d.trajectories[t].samples.front(), again.trajectories[t].samples.front());
    }
}

TEST(PresentationSequence, ShufflesWholeTrajectoriesOnly) {
    auto d = generate_synthetic(SyntheticSpec{}, 1);
    Rng rng(9);
    const auto seq = presentation_sequence(d, rng);
    for (std::size_t i = 0; i < seq.size(); ++i) EXPECT_EQ(seq[i], i);
    d.presentation_order = PresentationOrder::shuffled_trajectories;
    const auto shuffled = presentation_sequence(d, rng);
    EXPECT_EQ(std::set<std::size_t>(shuffled.begin(), shuffled.end()).size(), d.trajectories.size());
    EXPECT_NE(shuffled, seq);
    EXPECT_EQ(presentation_order_from_string("shuffled-trajectories"), PresentationOrder::shuffled_trajectories);
    EXPECT_THROW(presentation_order_from_string("random"), ConfigError);
}

TEST(Dataset, BoundingBoxAndCounts) {
    const auto d = testing_support::dataset_of({{vec({0, 5}), vec({2, -1})}, {vec({-3, 4}), vec({1, 1})}});
    EXPECT_EQ(d.sample_count(), 4u);
    EXPECT_EQ(d.dim(), 2);
    const auto [lo, hi] = d.bounding_box();
    EXPECT_EQ(lo, vec({-3, -1}));
    EXPECT_EQ(hi, vec({2, 5}));
}
