#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ppmkit/eventlog.hpp"
#include "ppmkit/json.hpp"
#include "ppmkit/model.hpp"
#include "ppmkit/rational.hpp"

namespace ppmkit {

/// A split...join region with two or more parallel or optional paths.
struct Block {
  std::string split_id;
  std::string join_id;
  /// Split, join and interior nodes present when the block first became
  /// complete. Edges are never members.
  std::vector<std::string> members;
  std::uint64_t completion_seq = 0;
  /// Closed interval spanned by the members' create events.
  Timestamp interval_start{};
  Timestamp interval_end{};
  /// No foreign node was created between the first and last member create.
  bool made_as_whole = false;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Interior nodes of the (split, join) region, or nullopt when the pair is
/// not a block in `model`:
///  - split is a gateway with >= 2 outgoing edges, join a gateway with >= 2
///    incoming edges;
///  - at least two edge-disjoint directed paths lead from split to join;
///  - the interior (nodes reachable from split without passing join that
///    reach join without passing split) is only entered through split and
///    only left through join, and every outgoing edge of split / incoming
///    edge of join stays inside the region.
std::optional<std::set<std::string>> block_interior(const ProcessModel& model, const std::string& split,
                                                    const std::string& join);

/// Every block of the final model, ordered by completion seq. Members,
/// completion and interval are taken from the replay snapshot at which the
/// block first became complete. Throws std::invalid_argument when `model` is
/// not the final model of `log`.
std::vector<Block> detect_blocks(const ProcessModel& model, const EventLog& log);

/// Maximum number of block intervals containing a common instant (closed
/// intervals; touching endpoints overlap).
std::size_t max_simul_block(std::span<const Block> blocks);

bool is_made_as_whole(const Block& block, const EventLog& log);

/// Fraction of blocks made as a whole; nullopt for zero blocks.
MaybeRational perc_blocks_as_whole(std::span<const Block> blocks, const EventLog& log);

Json block_to_json(const Block& block);

}  // namespace ppmkit
