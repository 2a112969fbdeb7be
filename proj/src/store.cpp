#include "zetalab/store.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace zetalab {

namespace {

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string fixed12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}

std::string sci3(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

double parse_real(const std::string& field, long line_no) {
    try {
        size_t pos = 0;
        double v = std::stod(field, &pos);
        if (pos != field.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw parse_error("archive: bad numeric field at line " + std::to_string(line_no));
    }
}

long parse_int(const std::string& field, long line_no) {
    try {
        size_t pos = 0;
        long v = std::stol(field, &pos);
        if (pos != field.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw parse_error("archive: bad integer field at line " + std::to_string(line_no));
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

void validate(const ZeroArchive& a) {
    auto check_window = [&](double g) {
        if (g <= a.t_lo - 1e-9 || g > a.t_hi + 1e-9)
            throw integrity_error("archive: record outside the declared window");
    };
    switch (a.kind) {
        case ArchiveKind::zeta: {
            for (size_t i = 0; i < a.zeta_records.size(); ++i) {
                if (i > 0 && a.zeta_records[i].gamma <= a.zeta_records[i - 1].gamma)
                    throw integrity_error("archive: zeta records not strictly increasing");
                check_window(a.zeta_records[i].gamma);
            }
            break;
        }
        case ArchiveKind::zeta_prime: {
            for (size_t i = 0; i < a.zprime_records.size(); ++i) {
                if (i > 0 &&
                    a.zprime_records[i].gamma_prime < a.zprime_records[i - 1].gamma_prime)
                    throw integrity_error("archive: zeta' records not sorted");
                check_window(a.zprime_records[i].gamma_prime);
            }
            break;
        }
        case ArchiveKind::pairing: {
            for (size_t i = 0; i < a.pairing_records.size(); ++i) {
                if (i > 0 && a.pairing_records[i].zprime.gamma_prime <
                                 a.pairing_records[i - 1].zprime.gamma_prime)
                    throw integrity_error("archive: pairing records not sorted");
                check_window(a.pairing_records[i].zprime.gamma_prime);
            }
            break;
        }
    }
}

}  // namespace

const char* archive_kind_name(ArchiveKind kind) {
    switch (kind) {
        case ArchiveKind::zeta: return "zeta";
        case ArchiveKind::zeta_prime: return "zeta_prime";
        case ArchiveKind::pairing: return "pairing";
    }
    return "?";
}

size_t ZeroArchive::record_count() const {
    switch (kind) {
        case ArchiveKind::zeta: return zeta_records.size();
        case ArchiveKind::zeta_prime: return zprime_records.size();
        case ArchiveKind::pairing: return pairing_records.size();
    }
    return 0;
}

std::string ZeroArchive::record_block() const {
    std::string out;
    switch (kind) {
        case ArchiveKind::zeta:
            for (const auto& z : zeta_records) {
                out += std::to_string(z.index);
                out += ',';
                out += fixed12(z.gamma);
                out += '\n';
            }
            break;
        case ArchiveKind::zeta_prime:
            for (const auto& z : zprime_records) {
                out += fixed12(z.beta_prime);
                out += ',';
                out += fixed12(z.gamma_prime);
                out += ',';
                out += sci3(z.newton_residual);
                out += '\n';
            }
            break;
        case ArchiveKind::pairing:
            for (const auto& p : pairing_records) {
                out += fixed12(p.zprime.beta_prime);
                out += ',';
                out += fixed12(p.zprime.gamma_prime);
                out += ',';
                out += fixed12(p.rho_c_gamma);
                out += ',';
                out += fixed12(p.dist);
                out += ',';
                out += fixed12(p.gap_down);
                out += ',';
                out += fixed12(p.gap_up);
                out += ',';
                out += fixed12(p.log_T);
                out += '\n';
            }
            break;
    }
    return out;
}

std::uint64_t ZeroArchive::checksum() const { return fnv1a(record_block()); }

ZeroArchive make_zeta_archive(double t_lo, double t_hi, std::vector<ZetaZero> records) {
    ZeroArchive a;
    a.kind = ArchiveKind::zeta;
    a.t_lo = t_lo;
    a.t_hi = t_hi;
    a.zeta_records = std::move(records);
    validate(a);
    return a;
}

ZeroArchive make_zprime_archive(double t_lo, double t_hi,
                                std::vector<ZPrimeZero> records) {
    ZeroArchive a;
    a.kind = ArchiveKind::zeta_prime;
    a.t_lo = t_lo;
    a.t_hi = t_hi;
    a.zprime_records = std::move(records);
    validate(a);
    return a;
}

ZeroArchive make_pairing_archive(double t_lo, double t_hi,
                                 std::vector<PairingRecord> records) {
    ZeroArchive a;
    a.kind = ArchiveKind::pairing;
    a.t_lo = t_lo;
    a.t_hi = t_hi;
    a.pairing_records = std::move(records);
    validate(a);
    return a;
}

bool same_records(const ZeroArchive& a, const ZeroArchive& b) {
    return a.kind == b.kind && a.record_block() == b.record_block();
}

void save_archive(const ZeroArchive& archive, const std::string& path) {
    validate(archive);
    std::string body;
    {
        std::ostringstream header;
        header << "format," << archive.format_version << ','
               << archive_kind_name(archive.kind) << ',' << fixed12(archive.t_lo) << ','
               << fixed12(archive.t_hi) << '\n';
        body = header.str();
    }
    const std::string block = archive.record_block();
    body += block;
    {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a(block));
        body += "checksum,";
        body += buf;
        body += '\n';
    }

    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw error("save_archive: cannot open " + tmp.string());
        out << body;
        if (!out) throw error("save_archive: write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw error("save_archive: rename failed: " + ec.message());
}

ZeroArchive load_archive(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("load_archive: cannot open " + path);

    std::string line;
    long line_no = 0;
    if (!std::getline(in, line)) throw parse_error("archive: empty file");
    ++line_no;
    auto head = split_csv(line);
    if (head.size() != 5 || head[0] != "format")
        throw parse_error("archive: malformed header at line 1");

    ZeroArchive a;
    a.format_version = static_cast<int>(parse_int(head[1], 1));
    if (a.format_version != 1) throw parse_error("archive: unsupported format version");
    const std::string kind = head[2];
    if (kind == "zeta")
        a.kind = ArchiveKind::zeta;
    else if (kind == "zeta_prime")
        a.kind = ArchiveKind::zeta_prime;
    else if (kind == "pairing")
        a.kind = ArchiveKind::pairing;
    else
        throw parse_error("archive: unknown kind at line 1");
    a.t_lo = parse_real(head[3], 1);
    a.t_hi = parse_real(head[4], 1);

    std::string block;
    bool saw_checksum = false;
    std::uint64_t declared = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields[0] == "checksum") {
            if (fields.size() != 2 || fields[1].size() != 16)
                throw parse_error("archive: malformed checksum at line " +
                                  std::to_string(line_no));
            declared = std::strtoull(fields[1].c_str(), nullptr, 16);
            saw_checksum = true;
            break;
        }
        block += line;
        block += '\n';
        switch (a.kind) {
            case ArchiveKind::zeta: {
                if (fields.size() != 2)
                    throw parse_error("archive: expected 2 fields at line " +
                                      std::to_string(line_no));
                ZetaZero z;
                z.index = parse_int(fields[0], line_no);
                z.gamma = parse_real(fields[1], line_no);
                a.zeta_records.push_back(z);
                break;
            }
            case ArchiveKind::zeta_prime: {
                if (fields.size() != 3)
                    throw parse_error("archive: expected 3 fields at line " +
                                      std::to_string(line_no));
                ZPrimeZero z;
                z.beta_prime = parse_real(fields[0], line_no);
                z.gamma_prime = parse_real(fields[1], line_no);
                z.newton_residual = parse_real(fields[2], line_no);
                a.zprime_records.push_back(z);
                break;
            }
            case ArchiveKind::pairing: {
                if (fields.size() != 7)
                    throw parse_error("archive: expected 7 fields at line " +
                                      std::to_string(line_no));
                PairingRecord p;
                p.zprime.beta_prime = parse_real(fields[0], line_no);
                p.zprime.gamma_prime = parse_real(fields[1], line_no);
                p.rho_c_gamma = parse_real(fields[2], line_no);
                p.dist = parse_real(fields[3], line_no);
                p.gap_down = parse_real(fields[4], line_no);
                p.gap_up = parse_real(fields[5], line_no);
                p.gap_nearest = std::min(p.gap_up, p.gap_down);
                p.log_T = parse_real(fields[6], line_no);
                a.pairing_records.push_back(p);
                break;
            }
        }
    }
    if (!saw_checksum) throw integrity_error("archive: missing checksum trailer");
    if (fnv1a(block) != declared)
        throw integrity_error("archive: checksum mismatch (file corrupted?)");
    validate(a);
    return a;
}

ZeroArchive ingest_external(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("ingest_external: cannot open " + path);
    ZeroArchive a;
    a.kind = ArchiveKind::zeta;
    std::string line;
    long line_no = 0;
    double prev = -1e30;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        double g = parse_real(line, line_no);
        if (g <= prev)
            throw parse_error("ingest_external: non-monotone ordinate at line " +
                              std::to_string(line_no));
        prev = g;
        ZetaZero z;
        z.gamma = g;
        z.index = static_cast<long>(a.zeta_records.size()) + 1;
        a.zeta_records.push_back(z);
    }
    if (a.zeta_records.empty()) {
        a.t_lo = 0.0;
        a.t_hi = 0.0;
        return a;
    }
    a.t_lo = a.zeta_records.front().gamma - 1e-9;
    a.t_hi = a.zeta_records.back().gamma;
    return a;
}

CrossCheck cross_check(const ZeroArchive& local, const ZeroArchive& external) {
    if (local.kind != ArchiveKind::zeta || external.kind != ArchiveKind::zeta)
        throw domain_error("cross_check: both archives must hold zeta ordinates");
    const double lo = std::max(local.t_lo, external.t_lo);
    const double hi = std::min(local.t_hi, external.t_hi);
    std::vector<double> a, b;
    for (const auto& z : local.zeta_records)
        if (z.gamma > lo && z.gamma <= hi) a.push_back(z.gamma);
    for (const auto& z : external.zeta_records)
        if (z.gamma > lo && z.gamma <= hi) b.push_back(z.gamma);
    if (a.size() != b.size())
        throw integrity_error("cross_check: overlap holds different record counts");
    CrossCheck out;
    out.overlap_count = static_cast<long>(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        double d = std::abs(a[i] - b[i]);
        if (d > out.max_deviation) {
            out.max_deviation = d;
            out.at_gamma = a[i];
        }
    }
    return out;
}

ZeroArchive merge_archives(const ZeroArchive& first, const ZeroArchive& second) {
    if (first.kind != second.kind)
        throw domain_error("merge_archives: mismatched kinds");
    if (std::abs(first.t_hi - second.t_lo) > 1e-9)
        throw domain_error("merge_archives: windows do not abut");
    ZeroArchive out = first;
    out.t_hi = second.t_hi;
    out.zeta_records.insert(out.zeta_records.end(), second.zeta_records.begin(),
                            second.zeta_records.end());
    out.zprime_records.insert(out.zprime_records.end(), second.zprime_records.begin(),
                              second.zprime_records.end());
    out.pairing_records.insert(out.pairing_records.end(),
                               second.pairing_records.begin(),
                               second.pairing_records.end());
    validate(out);
    return out;
}

}  // namespace zetalab
