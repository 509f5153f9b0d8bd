#include "pte/ensemble.hpp"

#include <cmath>
#include <string>

#include "pte/errors.hpp"

namespace pte {

ChunkBuffer::ChunkBuffer(int capacity, int inference_period)
    : capacity_(capacity), period_(inference_period) {
    if (capacity < 1) throw invalid_argument("buffer capacity must be >= 1");
    if (inference_period < 1) throw invalid_argument("inference period must be >= 1");
}

void ChunkBuffer::push(ActionChunk chunk) {
    if (chunk.inference_time < 0)
        throw ordering_error("inference_time must be >= 0, got " +
                             std::to_string(chunk.inference_time));
    if (chunk.actions.empty()) throw shape_error("chunk has no actions");

    const int len = static_cast<int>(chunk.actions.size());
    const int dof = static_cast<int>(chunk.actions.front().size());
    if (dof < 1) throw shape_error("chunk actions have zero dof");
    for (const auto& a : chunk.actions)
        if (static_cast<int>(a.size()) != dof)
            throw shape_error("inconsistent dof within chunk");

    if (chunk_len_ < 0) {
        chunk_len_ = len;
        dof_ = dof;
    } else {
        if (len != chunk_len_)
            throw shape_error("chunk length " + std::to_string(len) +
                              " does not match buffer chunk length " +
                              std::to_string(chunk_len_));
        if (dof != dof_)
            throw shape_error("chunk dof " + std::to_string(dof) +
                              " does not match buffer dof " + std::to_string(dof_));
    }

    if (!chunks_.empty()) {
        const std::int64_t newest = chunks_.back().inference_time;
        if (chunk.inference_time <= newest)
            throw ordering_error("inference_time " + std::to_string(chunk.inference_time) +
                                 " is not after newest " + std::to_string(newest));
        if ((chunk.inference_time - newest) % period_ != 0)
            throw ordering_error("inference_time " + std::to_string(chunk.inference_time) +
                                 " is not aligned to period " + std::to_string(period_) +
                                 " from newest " + std::to_string(newest));
    }

    chunks_.push_back(std::move(chunk));
    if (static_cast<int>(chunks_.size()) > capacity_) chunks_.pop_front();
}

std::int64_t ChunkBuffer::newest_time() const {
    if (chunks_.empty()) throw empty_column_error("buffer is empty");
    return chunks_.back().inference_time;
}

std::int64_t ChunkBuffer::oldest_time() const {
    if (chunks_.empty()) throw empty_column_error("buffer is empty");
    return chunks_.front().inference_time;
}

std::vector<double> weight_vector(double m, int n) {
    if (n < 1) throw invalid_argument("weight_vector needs n >= 1");
    if (!(m >= 0.0) || !std::isfinite(m))
        throw invalid_argument("weight_vector needs finite m >= 0");

    std::vector<double> w(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        w[static_cast<std::size_t>(i)] = std::exp(-m * static_cast<double>(i));
        sum += w[static_cast<std::size_t>(i)];
    }
    for (auto& x : w) x /= sum;
    return w;
}

void push_chunk(ChunkBuffer& buffer, ActionChunk chunk) {
    buffer.push(std::move(chunk));
}

namespace {

// Shared guts of proleptic_column / column_sources: calls `take(chunk, offset)`
// for each contributing chunk, newest first. Offsets grow as we walk toward
// older chunks, so the scan stops at the first offset past the chunk end.
template <typename Take>
void for_each_column_entry(const ChunkBuffer& buffer, std::int64_t t, int f,
                           Take&& take) {
    if (buffer.empty()) throw empty_column_error("buffer is empty");
    const int len = buffer.chunk_len();
    if (f < 0 || f > len - 1)
        throw invalid_argument("f = " + std::to_string(f) + " outside [0, " +
                               std::to_string(len - 1) + "]");
    if (t < buffer.newest_time())
        throw invalid_argument("t = " + std::to_string(t) +
                               " precedes newest inference time " +
                               std::to_string(buffer.newest_time()));

    bool any = false;
    const auto& chunks = buffer.chunks();
    for (auto it = chunks.rbegin(); it != chunks.rend(); ++it) {
        const std::int64_t offset = t + static_cast<std::int64_t>(f) - it->inference_time;
        if (offset > len - 1) break;
        if (offset < 0) continue;
        take(*it, static_cast<std::size_t>(offset));
        any = true;
    }
    if (!any)
        throw empty_column_error("no chunk covers target time " +
                                 std::to_string(t + f));
}

}  // namespace

std::vector<ActionVector> proleptic_column(const ChunkBuffer& buffer,
                                           std::int64_t t, int f) {
    std::vector<ActionVector> column;
    for_each_column_entry(buffer, t, f, [&](const ActionChunk& c, std::size_t off) {
        column.push_back(c.actions[off]);
    });
    return column;
}

std::vector<std::int64_t> column_sources(const ChunkBuffer& buffer,
                                         std::int64_t t, int f) {
    std::vector<std::int64_t> sources;
    for_each_column_entry(buffer, t, f, [&](const ActionChunk& c, std::size_t) {
        sources.push_back(c.inference_time);
    });
    return sources;
}

ActionVector ensemble_action(const ChunkBuffer& buffer, std::int64_t t,
                             const EnsembleConfig& config) {
    const std::vector<ActionVector> column = proleptic_column(buffer, t, config.f);
    const std::vector<double> w =
        weight_vector(config.m, static_cast<int>(column.size()));

    ActionVector out(column.front().size(), 0.0);
    for (std::size_t i = 0; i < column.size(); ++i)
        for (std::size_t d = 0; d < out.size(); ++d)
            out[d] += w[i] * column[i][d];
    return out;
}

}  // namespace pte
