#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "cascade/timestamp.hpp"

namespace cascade {

enum class MentionKind : std::uint8_t { Original, Retweet };

std::string_view to_string(MentionKind kind);
std::optional<MentionKind> parse_mention_kind(std::string_view text);

// One recorded tweet mentioning a publication.
struct MentionRecord {
  std::string tweet_id;
  std::string publication_id;
  std::optional<std::string> author_id;
  std::optional<Timestamp> posted_at;
  MentionKind kind = MentionKind::Original;
  std::optional<std::string> parent_tweet_id;

  bool operator==(const MentionRecord&) const = default;
};

enum class Availability : std::uint8_t { Available, Unavailable };

// Why a tweet is unavailable. The integer codes are the platform's lookup
// error codes.
enum class Reason : std::uint8_t { Deleted, Suspended, Protected, PageNotFound, Other };

inline constexpr int kErrorDeleted = 144;
inline constexpr int kErrorSuspended = 63;
inline constexpr int kErrorProtected = 179;
inline constexpr int kErrorPageNotFound = 34;

Reason classify_error(int error_code) noexcept;

// Deleted tweets and dead pages cannot come back; suspended accounts can be
// unlocked and protected accounts can be made public again.
constexpr bool is_reversible(Reason reason) noexcept {
  return reason == Reason::Suspended || reason == Reason::Protected;
}

// Inverse of classify_error for the four known reasons; nullopt for Other.
std::optional<int> error_code_for(Reason reason) noexcept;

std::string_view to_string(Reason reason);
std::string_view to_string(Availability availability);

struct StatusRecord {
  std::string tweet_id;
  Availability availability = Availability::Available;
  std::optional<Reason> reason;
  std::optional<int> error_code;
  Timestamp checked_at{};

  bool available() const noexcept { return availability == Availability::Available; }
  bool operator==(const StatusRecord&) const = default;
};

StatusRecord make_available(std::string tweet_id, Timestamp checked_at);
StatusRecord make_unavailable(std::string tweet_id, std::optional<int> error_code,
                              Timestamp checked_at);

}  // namespace cascade
