#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wum/fcm.hpp"
#include "wum/features.hpp"
#include "wum/log_ingest.hpp"
#include "wum/sessionizer.hpp"

namespace wum::io {

std::vector<std::string> read_lines(const std::filesystem::path& path);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);
void ensure_directory(const std::filesystem::path& dir);

// Cleaned records: header "Time\tIP\tUserAgent\tElapsedTime\tBytes\tURL", Time in
// epoch seconds with millisecond fraction.
void write_cleaned(std::ostream& out, std::span<const CleanedRecord> records);
std::vector<CleanedRecord> read_cleaned(std::istream& in);

// "url_id\turl", one line per id in ascending order.
void write_url_map(std::ostream& out, const UrlMap& map);
UrlMap read_url_map(std::istream& in);

void write_clean_stats(std::ostream& out, const CleanStats& stats);
CleanStats read_clean_stats(std::istream& in);

// Session listing: "U<k>-S<j>" block header column, then one request per line.
void write_session_blocks(std::ostream& out, std::span<const Session> sessions);

// "user_key\tordinal\turl_id:freq,url_id:freq,..."
void write_sessions_compact(std::ostream& out, std::span<const Session> sessions);
std::vector<Session> read_sessions_compact(std::istream& in);

void write_session_stats(std::ostream& out, const SessionStats& stats);

// Header "m n scheme", then "weight\tcol:val,..." per row with 1-based columns.
void write_matrix(std::ostream& out, const SessionMatrix& matrix);
SessionMatrix read_matrix(std::istream& in);

// "column\turl_id\turl" with 1-based columns; url is "-" when unknown.
void write_catalog(std::ostream& out, const SessionMatrix& matrix, const UrlMap* urls);
std::vector<std::pair<UrlId, std::string>> read_catalog(std::istream& in);

// "row\tuser_key\tordinal", 1-based rows aligned with the matrix.
void write_row_index(std::ostream& out, std::span<const Session> sessions);
std::vector<std::string> read_row_index(std::istream& in);

// Columns c,J,S; failed cluster counts leave J and S empty.
void write_validity_csv(std::ostream& out, const ValidityReport& report);

// V dense, U sparse (entries above 1e-4), objective trace, config echo.
std::string model_to_json(const FcmModel& model, const FcmConfig& cfg);

struct ProfileLabels {
  const std::vector<std::pair<UrlId, std::string>>* catalog = nullptr;
  const std::vector<std::string>* row_labels = nullptr;
};

void write_profiles(std::ostream& out, std::span<const Profile> profiles,
                    const ProfileLabels& labels = {});

}  // namespace wum::io
