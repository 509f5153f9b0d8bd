#pragma once

// The action-chunk buffer and the (proleptic) temporal ensemble: a command
// for control step t+f is a weighted average, over the retained chunks that
// cover that step, of each chunk's prediction for it. With f=0 this is the
// plain temporal ensemble; with f>0 the controller chases a point f steps
// ahead of the clock, which is what multiplies execution speed.

#include <cstdint>
#include <deque>
#include <vector>

#include "pte/types.hpp"

namespace pte {

// Bounded history of the most recent chunks, ordered by inference time.
// Inference times must advance by (multiples of) the inference period; the
// first chunk pushed fixes the chunk length and action dimension.
class ChunkBuffer {
public:
    explicit ChunkBuffer(int capacity, int inference_period = 1);

    // Throws ordering_error on duplicate/out-of-order/misaligned times,
    // shape_error on chunk length or dof mismatch. Evicts the oldest chunk
    // when full.
    void push(ActionChunk chunk);

    bool empty() const { return chunks_.empty(); }
    std::size_t size() const { return chunks_.size(); }
    int capacity() const { return capacity_; }
    int inference_period() const { return period_; }
    int chunk_len() const { return chunk_len_; }   // -1 until first push
    int dof() const { return dof_; }               // -1 until first push
    std::int64_t newest_time() const;              // throws if empty
    std::int64_t oldest_time() const;              // throws if empty

    // Oldest-first view of the retained chunks.
    const std::deque<ActionChunk>& chunks() const { return chunks_; }

private:
    int capacity_;
    int period_;
    int chunk_len_ = -1;
    int dof_ = -1;
    std::deque<ActionChunk> chunks_;
};

// Normalized exponential weights w_i = exp(-m*i) / sum_j exp(-m*j) for
// i = 0..n-1, where i=0 is the most recent inference. Non-increasing in i;
// sums to 1. Throws invalid_argument for n < 1 or m < 0 or non-finite m.
std::vector<double> weight_vector(double m, int n);

// Convenience free-function form of ChunkBuffer::push.
void push_chunk(ChunkBuffer& buffer, ActionChunk chunk);

// The ensemble column for target step t+f: each retained chunk with
// inference time v contributes its action at offset t+f-v, provided
// 0 <= t+f-v <= L-1. Ordered newest inference first. Throws invalid_argument
// if f is out of [0, L-1] or t precedes the newest inference time, and
// empty_column_error if no chunk covers t+f.
std::vector<ActionVector> proleptic_column(const ChunkBuffer& buffer,
                                           std::int64_t t, int f);

// Inference times of the chunks contributing to proleptic_column(t, f),
// newest first. Same error behavior; used for trace/staleness reporting.
std::vector<std::int64_t> column_sources(const ChunkBuffer& buffer,
                                         std::int64_t t, int f);

// The weighted average of the column for t+f, componentwise, with weights
// weight_vector(config.m, column length). With f=0 this is the baseline
// temporal ensemble.
ActionVector ensemble_action(const ChunkBuffer& buffer, std::int64_t t,
                             const EnsembleConfig& config);

}  // namespace pte
