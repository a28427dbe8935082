// Copyright 2026 the fogplan authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <sstream>
#include <string_view>

#include "fogplan/errors.hpp"
#include "fogplan/topology.hpp"

namespace fogplan::topology {

namespace {

// Static snapshot of the 100 most populated urban areas (name, population,
// lat, lon). Shipped with the repo so topology generation never touches the
// network; data/cities.csv carries the same table in file form.
constexpr std::string_view kDefaultCityTable = R"(name,population,lat,lon
Tokyo,37400068,35.6897,139.6922
Delhi,30290936,28.6139,77.2090
Shanghai,27058480,31.2304,121.4737
Sao Paulo,22043028,-23.5505,-46.6333
Mexico City,21782378,19.4326,-99.1332
Dhaka,21005860,23.8103,90.4125
Cairo,20900604,30.0444,31.2357
Beijing,20462610,39.9042,116.4074
Mumbai,20411274,19.0760,72.8777
Osaka,19165340,34.6937,135.5023
Karachi,16093786,24.8607,67.0011
Chongqing,15872179,29.4316,106.9123
Istanbul,15029231,41.0082,28.9784
Buenos Aires,15057273,-34.6037,-58.3816
Kolkata,14850066,22.5726,88.3639
Lagos,14368332,6.5244,3.3792
Kinshasa,14342439,-4.4419,15.2663
Manila,13923452,14.5995,120.9842
Tianjin,13589078,39.3434,117.3616
Rio de Janeiro,13458075,-22.9068,-43.1729
Guangzhou,13301532,23.1291,113.2644
Lahore,12642423,31.5204,74.3587
Moscow,12537954,55.7558,37.6173
Los Angeles,12447000,34.0522,-118.2437
Shenzhen,12356820,22.5431,114.0579
Bangalore,12326532,12.9716,77.5946
Paris,11017230,48.8566,2.3522
Bogota,10978360,4.7110,-74.0721
Chennai,10971108,13.0827,80.2707
Jakarta,10770487,-6.2088,106.8456
Lima,10719188,-12.0464,-77.0428
Bangkok,10539415,13.7563,100.5018
Hyderabad,10004144,17.3850,78.4867
Seoul,9963452,37.5665,126.9780
Nagoya,9552132,35.1815,136.9066
London,9304016,51.5074,-0.1278
Chengdu,9135768,30.5728,104.0668
Tehran,9134708,35.6892,51.3890
Chicago,8864249,41.8781,-87.6298
Nanjing,8847372,32.0603,118.7969
Ho Chi Minh City,8602317,10.8231,106.6297
Wuhan,8364978,30.5928,114.3055
Luanda,8329798,-8.8390,13.2894
Ahmedabad,8059441,23.0225,72.5714
Xian,8000965,34.3416,108.9398
Kuala Lumpur,7996830,3.1390,101.6869
Hangzhou,7642147,30.2741,120.1551
Hong Kong,7547652,22.3193,114.1694
Dongguan,7511300,23.0207,113.7518
Foshan,7326852,23.0218,113.1219
Shenyang,7220104,41.8057,123.4315
Surat,7184590,21.1702,72.8311
Baghdad,7144260,33.3152,44.3661
Riyadh,7070633,24.7136,46.6753
Suzhou,7069992,31.2989,120.5853
Santiago,6767223,-33.4489,-70.6693
Pune,6629347,18.5204,73.8567
Madrid,6617513,40.4168,-3.7038
Harbin,6387195,45.8038,126.5350
Houston,6371000,29.7604,-95.3698
Dar es Salaam,6368272,-6.7924,39.2083
Dallas,6301000,32.7767,-96.7970
Toronto,6196731,43.6532,-79.3832
Miami,6158824,25.7617,-80.1918
Belo Horizonte,6084430,-19.9167,-43.9345
Singapore,5850342,1.3521,103.8198
Atlanta,5803891,33.7490,-84.3880
Philadelphia,5717884,39.9526,-75.1652
Qingdao,5619977,36.0671,120.3826
Barcelona,5585556,41.3851,2.1734
Johannesburg,5634800,-26.2041,28.0473
Khartoum,5534000,15.5007,32.5599
Fukuoka,5529040,33.5904,130.4017
Ankara,5503985,39.9334,32.8597
Saint Petersburg,5383890,59.9311,30.3609
Jinan,5360000,36.6512,117.1201
Dalian,5300000,38.9140,121.6147
Washington,5322264,38.9072,-77.0369
Alexandria,5280664,31.2001,29.9187
Yangon,5244473,16.8661,96.1951
Abidjan,5203273,5.3600,-4.0083
Guadalajara,5179874,20.6597,-103.3496
Chittagong,5133000,22.3569,91.7832
Melbourne,4967733,-37.8136,144.9631
Sydney,4926700,-33.8688,151.2093
Boston,4873019,42.3601,-71.0589
Phoenix,4845832,33.4484,-112.0740
Nairobi,4734881,-1.2921,36.8219
Hanoi,4678198,21.0278,105.8342
Cape Town,4617560,-33.9249,18.4241
Izmir,4367251,38.4237,27.1428
Rome,4342212,41.9028,12.4964
Kabul,4221532,34.5553,69.2075
Accra,4221000,5.6037,-0.1870
Montreal,4220566,45.5017,-73.5673
Porto Alegre,4137417,-30.0346,-51.2177
Recife,4127091,-8.0476,-34.8770
Fortaleza,4073465,-3.7319,-38.5267
Amman,4007526,31.9454,35.9284
Medellin,4000000,6.2476,-75.5658
)";

std::vector<City> parse_city_csv(std::istream& in, const std::string& source) {
  std::vector<City> cities;
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("city table '" + source + "' is empty");
  }
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (line != "name,population,lat,lon") {
    throw ConfigError("city table '" + source + "' has unexpected header: " + line);
  }
  int id = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream row(line);
    City c;
    std::string field;
    if (!std::getline(row, c.name, ',')) {
      throw ConfigError("city table '" + source + "': bad row: " + line);
    }
    try {
      std::getline(row, field, ',');
      c.population = std::stoll(field);
      std::getline(row, field, ',');
      c.lat = std::stod(field);
      std::getline(row, field, ',');
      c.lon = std::stod(field);
    } catch (const std::exception&) {
      throw ConfigError("city table '" + source + "': bad row: " + line);
    }
    if (c.population <= 0) {
      throw ConfigError("city table '" + source + "': non-positive population for " + c.name);
    }
    if (c.lat < -90.0 || c.lat > 90.0 || c.lon < -180.0 || c.lon > 180.0) {
      throw ConfigError("city table '" + source + "': coordinates out of range for " + c.name);
    }
    c.id = id++;
    cities.push_back(std::move(c));
  }
  if (cities.empty()) {
    throw ConfigError("city table '" + source + "' has no rows");
  }
  return cities;
}

}  // namespace

std::vector<City> load_cities_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open city table: " + path);
  }
  return parse_city_csv(in, path);
}

const std::vector<City>& default_cities() {
  static const std::vector<City> cities = [] {
    std::istringstream in{std::string(kDefaultCityTable)};
    return parse_city_csv(in, "<bundled>");
  }();
  return cities;
}

}  // namespace fogplan::topology
