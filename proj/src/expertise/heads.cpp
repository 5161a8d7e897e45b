#include "emsrag/expertise/heads.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "emsrag/common/error.hpp"
#include "emsrag/common/jsonl.hpp"

static_assert(std::endian::native == std::endian::little,
              "heads file format assumes a little-endian host");

namespace emsrag::expertise {

namespace {

constexpr char kMagic[8] = {'E', 'M', 'S', 'R', 'H', 'D', 'S', '\0'};
constexpr std::uint32_t kFormatVersion = 1;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

std::pair<std::set<corpus::SubjectArea>, corpus::Certification> decide(
    std::span<const double> p_sub, std::span<const double> p_lvl, double threshold) {
    if (p_sub.size() != kSubjectHeadSize || p_lvl.size() != kLevelHeadSize)
        throw DimensionMismatch("decide: probability vector sizes " +
                                std::to_string(p_sub.size()) + "/" + std::to_string(p_lvl.size()));

    std::set<corpus::SubjectArea> subjects;
    for (int j = 0; j < kSubjectHeadSize; ++j)
        if (p_sub[static_cast<std::size_t>(j)] > threshold)
            subjects.insert(static_cast<corpus::SubjectArea>(j));
    if (subjects.empty()) {
        // Fallback: never hand retrieval an empty subject set.
        int best = 0;
        for (int j = 1; j < kSubjectHeadSize; ++j)
            if (p_sub[static_cast<std::size_t>(j)] > p_sub[static_cast<std::size_t>(best)])
                best = j;
        subjects.insert(static_cast<corpus::SubjectArea>(best));
    }

    int best_lvl = 0;
    for (int j = 1; j < kLevelHeadSize; ++j)
        if (p_lvl[static_cast<std::size_t>(j)] > p_lvl[static_cast<std::size_t>(best_lvl)])
            best_lvl = j;
    return {std::move(subjects), static_cast<corpus::Certification>(best_lvl)};
}

ExpertisePrediction predict(const ExpertiseHeads& heads, std::span<const double> features,
                            double threshold) {
    if (static_cast<int>(features.size()) != heads.dim)
        throw DimensionMismatch("predict: feature dim " + std::to_string(features.size()) +
                                ", heads dim " + std::to_string(heads.dim));

    ExpertisePrediction pred;
    for (int j = 0; j < kSubjectHeadSize; ++j) {
        double z = heads.b_sub[static_cast<std::size_t>(j)];
        for (int d = 0; d < heads.dim; ++d)
            z += heads.w_sub[static_cast<std::size_t>(d) * kSubjectHeadSize +
                             static_cast<std::size_t>(j)] *
                 features[static_cast<std::size_t>(d)];
        pred.p_sub[static_cast<std::size_t>(j)] = sigmoid(z);
    }

    std::array<double, kLevelHeadSize> logits{};
    double max_logit = -1e300;
    for (int j = 0; j < kLevelHeadSize; ++j) {
        double z = heads.b_lvl[static_cast<std::size_t>(j)];
        for (int d = 0; d < heads.dim; ++d)
            z += heads.w_lvl[static_cast<std::size_t>(d) * kLevelHeadSize +
                             static_cast<std::size_t>(j)] *
                 features[static_cast<std::size_t>(d)];
        logits[static_cast<std::size_t>(j)] = z;
        max_logit = std::max(max_logit, z);
    }
    double denom = 0.0;
    for (int j = 0; j < kLevelHeadSize; ++j) {
        logits[static_cast<std::size_t>(j)] = std::exp(logits[static_cast<std::size_t>(j)] - max_logit);
        denom += logits[static_cast<std::size_t>(j)];
    }
    for (int j = 0; j < kLevelHeadSize; ++j)
        pred.p_lvl[static_cast<std::size_t>(j)] = logits[static_cast<std::size_t>(j)] / denom;

    auto [subjects, certification] = decide(pred.p_sub, pred.p_lvl, threshold);
    pred.subjects = std::move(subjects);
    pred.certification = certification;
    return pred;
}

void ExpertiseHeads::save(const std::filesystem::path& path) const {
    std::string blob;
    blob.append(kMagic, sizeof(kMagic));
    auto put_u32 = [&](std::uint32_t v) { blob.append(reinterpret_cast<const char*>(&v), 4); };
    auto put_u64 = [&](std::uint64_t v) { blob.append(reinterpret_cast<const char*>(&v), 8); };
    put_u32(kFormatVersion);
    put_u32(static_cast<std::uint32_t>(dim));
    put_u32(kSubjectHeadSize);
    put_u32(kLevelHeadSize);
    put_u64(seed);
    put_u32(static_cast<std::uint32_t>(epochs));
    put_u32(static_cast<std::uint32_t>(feature_backend.size()));
    blob += feature_backend;
    auto put_doubles = [&](const double* p, std::size_t n) {
        blob.append(reinterpret_cast<const char*>(p), n * sizeof(double));
    };
    put_doubles(w_sub.data(), w_sub.size());
    put_doubles(b_sub.data(), b_sub.size());
    put_doubles(w_lvl.data(), w_lvl.size());
    put_doubles(b_lvl.data(), b_lvl.size());
    jsonl::write_text_atomic(path, blob);
}

ExpertiseHeads ExpertiseHeads::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open heads file " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw IoError(path.string() + ": not a heads file");
    auto get_u32 = [&] {
        std::uint32_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get_u64 = [&] {
        std::uint64_t v = 0;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    const std::uint32_t version = get_u32();
    if (version != kFormatVersion)
        throw IoError(path.string() + ": unsupported heads version " + std::to_string(version));
    ExpertiseHeads heads;
    heads.dim = static_cast<int>(get_u32());
    const std::uint32_t n_sub = get_u32();
    const std::uint32_t n_lvl = get_u32();
    if (n_sub != kSubjectHeadSize || n_lvl != kLevelHeadSize)
        throw IoError(path.string() + ": head sizes " + std::to_string(n_sub) + "/" +
                      std::to_string(n_lvl) + " do not match this build");
    heads.seed = get_u64();
    heads.epochs = static_cast<int>(get_u32());
    const std::uint32_t backend_len = get_u32();
    heads.feature_backend.resize(backend_len);
    in.read(heads.feature_backend.data(), backend_len);
    heads.w_sub.resize(static_cast<std::size_t>(heads.dim) * kSubjectHeadSize);
    heads.w_lvl.resize(static_cast<std::size_t>(heads.dim) * kLevelHeadSize);
    auto get_doubles = [&](double* p, std::size_t n) {
        in.read(reinterpret_cast<char*>(p), static_cast<std::streamsize>(n * sizeof(double)));
    };
    get_doubles(heads.w_sub.data(), heads.w_sub.size());
    get_doubles(heads.b_sub.data(), heads.b_sub.size());
    get_doubles(heads.w_lvl.data(), heads.w_lvl.size());
    get_doubles(heads.b_lvl.data(), heads.b_lvl.size());
    if (!in) throw IoError(path.string() + ": truncated heads data");
    return heads;
}

}  // namespace emsrag::expertise
