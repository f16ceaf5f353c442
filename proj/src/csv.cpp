#include "wtsim/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wtsim {

namespace {

constexpr const char* k_header =
    "t,v_pcc_pu,v_dc,p_inj_w,q_inj_var,i_rms_a,w_m_rad_s,t_e_nm,msc_sat,gsc_sat";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_timeseries_csv(const TimeSeries& ts, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << k_header << '\n';
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out << fmt(ts.t[i]) << ',' << fmt(ts.v_pcc_pu[i]) << ',' << fmt(ts.v_dc[i]) << ','
            << fmt(ts.p_inj_w[i]) << ',' << fmt(ts.q_inj_var[i]) << ',' << fmt(ts.i_rms_a[i])
            << ',' << fmt(ts.w_m_rad_s[i]) << ',' << fmt(ts.t_e_nm[i]) << ','
            << int(ts.msc_sat[i]) << ',' << int(ts.gsc_sat[i]) << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

TimeSeries read_timeseries_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path);

    std::string line;
    if (!std::getline(in, line) || line != k_header)
        throw std::runtime_error("unexpected CSV header in " + path);

    TimeSeries ts;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        double cols[8];
        for (double& col : cols) {
            if (!std::getline(ss, cell, ','))
                throw std::runtime_error(path + ": short row at line " + std::to_string(line_no));
            col = std::stod(cell);
        }
        int flags[2];
        for (int& flag : flags) {
            if (!std::getline(ss, cell, ','))
                throw std::runtime_error(path + ": short row at line " + std::to_string(line_no));
            flag = std::stoi(cell);
        }
        ts.t.push_back(cols[0]);
        ts.v_pcc_pu.push_back(cols[1]);
        ts.v_dc.push_back(cols[2]);
        ts.p_inj_w.push_back(cols[3]);
        ts.q_inj_var.push_back(cols[4]);
        ts.i_rms_a.push_back(cols[5]);
        ts.w_m_rad_s.push_back(cols[6]);
        ts.t_e_nm.push_back(cols[7]);
        ts.msc_sat.push_back(static_cast<std::uint8_t>(flags[0]));
        ts.gsc_sat.push_back(static_cast<std::uint8_t>(flags[1]));
    }
    return ts;
}

}  // namespace wtsim
