#pragma once

// CSV persistence for computed zeros and pairings, plus ingestion of
// externally published ordinate tables for cross-validation.
//
// Schema (one file per archive):
//   header   format,<version>,<kind>,<t_lo>,<t_hi>
//   records  kind zeta       : index,gamma
//            kind zeta_prime : beta_prime,gamma_prime,newton_residual
//            kind pairing    : beta_prime,gamma_prime,gamma_c,dist,gap_down,gap_up,log_T
//   trailer  checksum,<16 hex digits>
//
// Coordinates carry 12 fixed decimals; the Newton residual is scientific.
// The checksum is FNV-1a over the record block, integrity only. Writes are
// atomic (temp file + rename). Records are sorted by ordinate; load
// re-validates ordering, window consistency and the checksum.

#include <cstdint>
#include <string>
#include <vector>

#include "zetalab/zeros.hpp"

namespace zetalab {

enum class ArchiveKind { zeta, zeta_prime, pairing };
const char* archive_kind_name(ArchiveKind kind);

struct ZeroArchive {
    int format_version = 1;
    ArchiveKind kind = ArchiveKind::zeta;
    double t_lo = 0.0, t_hi = 0.0;
    std::vector<ZetaZero> zeta_records;
    std::vector<ZPrimeZero> zprime_records;
    std::vector<PairingRecord> pairing_records;

    size_t record_count() const;
    // serialized record block (exactly what the checksum covers)
    std::string record_block() const;
    std::uint64_t checksum() const;
};

ZeroArchive make_zeta_archive(double t_lo, double t_hi, std::vector<ZetaZero> records);
ZeroArchive make_zprime_archive(double t_lo, double t_hi,
                                std::vector<ZPrimeZero> records);
ZeroArchive make_pairing_archive(double t_lo, double t_hi,
                                 std::vector<PairingRecord> records);

// Archives are equal when their serialized forms agree (stored precision).
bool same_records(const ZeroArchive& a, const ZeroArchive& b);

void save_archive(const ZeroArchive& archive, const std::string& path);
ZeroArchive load_archive(const std::string& path);

// Plain text, one increasing decimal ordinate per line; indices inferred from
// position.  Non-monotone input raises parse_error naming the line.
ZeroArchive ingest_external(const std::string& path);

struct CrossCheck {
    long overlap_count = 0;
    double max_deviation = 0.0;
    double at_gamma = 0.0;  // local ordinate attaining the maximum
};

// Compare ordinates over the overlapping height range, pairing by order.
CrossCheck cross_check(const ZeroArchive& local, const ZeroArchive& external);

// Concatenate (a,b] and (b,c] into (a,c]; kinds must match and the windows
// must abut.
ZeroArchive merge_archives(const ZeroArchive& first, const ZeroArchive& second);

}  // namespace zetalab
