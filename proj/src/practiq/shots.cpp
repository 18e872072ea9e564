#include "practiq/bench.hpp"

namespace practiq::bench {

namespace {

Shot make_shot(CategoryLabel category, const std::string& schema_block,
               const std::string& question, const std::string& thoughts) {
  Shot s;
  s.category = category;
  s.user_message =
      "<schema>\n" + schema_block + "\n</schema>\n\n<question>\n" + question + "\n</question>";
  s.assistant_message = "<scratch>\n" + thoughts + "\n</scratch>\n<result>\n" +
                        to_token(category) + "\n</result>";
  return s;
}

std::string table_md(const std::string& name,
                     const std::vector<std::pair<std::string, std::string>>& cols) {
  std::string out = "## " + name + "\n\n| Column Name | Data Type | Description |\n| --- | --- | --- |\n";
  for (const auto& [col, desc] : cols) out += "| " + col + " | str | " + desc + " |\n";
  out.pop_back();
  return out;
}

std::vector<Shot> build_shots() {
  std::vector<Shot> shots;
  using C = CategoryLabel;

  // -- Ambiguous SELECT column ----------------------------------------------
  shots.push_back(make_shot(
      C::AmbiguousSelectColumn,
      table_md("stadium", {{"Stadium_Name", "Example values: Harbor Park, Riverside Arena"},
                           {"Standing_Capacity", "Example values: 63026, 57200"},
                           {"Seating_Capacity", "Example values: 58838, 52100"},
                           {"Average_Num_Games_Played", "Example values: 22, 31"}}),
      "What is the maximum capacity of all stadiums?",
      "The question asks for a maximum capacity. The schema offers two capacity columns, "
      "Standing_Capacity and Seating_Capacity, and either is a valid reading of the question. "
      "Because the requested output column is ambiguous, this is an ambiguous SELECT column "
      "case."));
  shots.push_back(make_shot(
      C::AmbiguousSelectColumn,
      table_md("visitor", {{"ID", "Example values: 1, 2, 3"},
                           {"Name", "Example values: Dana, Arlo"},
                           {"Age_at_Entry", "Example values: 34, 29"},
                           {"Current_Age", "Example values: 41, 33"}}),
      "Find the name and age of the oldest visitor.",
      "The question requests an age, but the table has both Age_at_Entry and Current_Age. Both "
      "columns are plausible interpretations of \"age\", so the SELECT clause could be written "
      "two valid ways."));
  shots.push_back(make_shot(
      C::AmbiguousSelectColumn,
      table_md("employee", {{"Emp_ID", "Example values: 10, 11"},
                            {"Name", "Example values: Irene Ko, Saul Ortiz"},
                            {"Base_Salary", "Example values: 52000, 61000"},
                            {"Total_Salary", "Example values: 58500, 70300"}}),
      "What is the highest salary in the company?",
      "\"Salary\" could mean Base_Salary or Total_Salary; both columns exist and differ. The "
      "output column is therefore ambiguous."));

  // -- Ambiguous WHERE column -----------------------------------------------
  shots.push_back(make_shot(
      C::AmbiguousWhereColumn,
      table_md("ship", {{"Name", "Example values: HMS Varley, SS Meridian"},
                        {"Port_of_Origin", "Example values: English Channel, North Sea"},
                        {"Destination", "Example values: English Channel, Baltic Sea"}}) +
          "\n\n### Relevant values\n\"ship.Port_of_Origin\": [\"English Channel\"]\n"
          "\"ship.Destination\": [\"English Channel\"]",
      "Show the names of the ships in the English Channel.",
      "The filter value 'English Channel' appears in two different columns, Port_of_Origin and "
      "Destination. The WHERE clause could legitimately target either column, so the filter "
      "column is ambiguous."));
  shots.push_back(make_shot(
      C::AmbiguousWhereColumn,
      table_md("properties", {{"property_type_code", "Example values: 5, 10, 15"},
                              {"property_type_version", "Example values: 5, 25"},
                              {"property_name", "Example values: Sunview, Lakeside"}}) +
          "\n\n### Relevant values\n\"properties.property_type_code\": [\"5\"]\n"
          "\"properties.property_type_version\": [\"5\"]",
      "What are the names of properties whose property type is a multiple of 5?",
      "\"Property type\" matches both property_type_code and property_type_version, and both "
      "columns contain values divisible by 5. Two valid WHERE clauses exist."));
  shots.push_back(make_shot(
      C::AmbiguousWhereColumn,
      table_md("flight", {{"flight_no", "Example values: UA12, DL7"},
                          {"origin_code", "Example values: JFK, LAX"},
                          {"transfer_code", "Example values: JFK, ORD"}}) +
          "\n\n### Relevant values\n\"flight.origin_code\": [\"JFK\"]\n"
          "\"flight.transfer_code\": [\"JFK\"]",
      "How many flights go through JFK?",
      "JFK occurs in both origin_code and transfer_code. Filtering on either column matches the "
      "question, so the WHERE column is ambiguous."));

  // -- Ambiguous values within column ---------------------------------------
  shots.push_back(make_shot(
      C::AmbiguousValuesWithinColumn,
      table_md("classroom", {{"Subject", "Example values: Organic Chemistry, Physical Chemistry, "
                                         "Physics"},
                             {"Teacher_Name", "Example values: Edda Vance, Liam Shah"}}) +
          "\n\n### Relevant values\n\"classroom.Subject\": [\"Organic Chemistry\", \"Physical "
          "Chemistry\"]",
      "Who is the Chemistry teacher?",
      "The Subject column holds two different values matching \"Chemistry\": Organic Chemistry "
      "and Physical Chemistry. The mentioned value maps to multiple cell values in one column."));
  shots.push_back(make_shot(
      C::AmbiguousValuesWithinColumn,
      table_md("templates", {{"Template_Type_Code", "Example values: useful CV 1, useful CV 2, "
                                                    "useful professional CV"},
                             {"Version_Number", "Example values: 1, 4"}}) +
          "\n\n### Relevant values\n\"templates.Template_Type_Code\": [\"useful CV 1\", \"useful "
          "CV 2\", \"useful professional CV\"]",
      "How many templates have template type code useful CV?",
      "\"useful CV\" is close to several stored codes: useful CV 1, useful CV 2 and useful "
      "professional CV. The filter value inside the column is ambiguous."));
  shots.push_back(make_shot(
      C::AmbiguousValuesWithinColumn,
      table_md("products", {{"product_name", "Example values: Choco Bar Classic, Choco Bar Dark"},
                            {"price", "Example values: 2.5, 3.1"}}) +
          "\n\n### Relevant values\n\"products.product_name\": [\"Choco Bar Classic\", \"Choco "
          "Bar Dark\"]",
      "What is the price of the Choco Bar?",
      "Two product names match \"Choco Bar\": Choco Bar Classic and Choco Bar Dark. The question "
      "maps to multiple different values within product_name."));

  // -- Ambiguous filter criteria --------------------------------------------
  shots.push_back(make_shot(
      C::AmbiguousFilterCriteria,
      table_md("patients", {{"patient_id", "Example values: 101, 102"},
                            {"patient_age", "Example values: 15, 34, 62"},
                            {"examination_date", "Example values: 1991-04-02, 1992-11-20"}}),
      "How many underage patients were examined during the three years from 1990 to 1993?",
      "\"Underage\" is a relative term; the cutoff age is not stated anywhere in the schema or "
      "the question. Without a definition the filter cannot be written precisely."));
  shots.push_back(make_shot(
      C::AmbiguousFilterCriteria,
      table_md("cars", {{"model", "Example values: Falcon, Gremlin"},
                        {"horsepower", "Example values: 90, 215"}}),
      "List the fast cars.",
      "\"Fast\" is a descriptive criterion with no fixed threshold in the data. The filter "
      "criteria are vague and need clarification."));
  shots.push_back(make_shot(
      C::AmbiguousFilterCriteria,
      table_md("orders", {{"order_id", "Example values: 7001, 7002"},
                          {"total_amount", "Example values: 49.9, 1220.0"}}),
      "Show the large orders from this table.",
      "\"Large\" does not correspond to any concrete value or threshold; different cutoffs give "
      "different answers. The criterion is open to interpretation."));

  // -- Nonexistent SELECT column --------------------------------------------
  shots.push_back(make_shot(
      C::NonexistentSelectColumn,
      table_md("shop", {{"Shop_ID", "Example values: 1, 2"},
                        {"Shop_Name", "Example values: Dinas Device, Pentre store"},
                        {"Location", "Example values: Dinas, Pentre"}}) +
          "\n\n" +
          table_md("device", {{"Device_ID", "Example values: 1, 2"},
                              {"Device", "Example values: Huawei, Apple"},
                              {"Software_Platform", "Example values: Android, iOS"}}),
      "What are the carriers of devices that are not in stock anywhere?",
      "The question asks for carriers of devices. Scanning the tables, there is no column with "
      "carrier information; Device holds manufacturers and Software_Platform holds operating "
      "systems. The requested output column does not exist."));
  shots.push_back(make_shot(
      C::NonexistentSelectColumn,
      table_md("olympics", {{"Medal", "Example values: gold, silver"},
                            {"Sportsman_Name", "Example values: K. Aldag, R. Moen"},
                            {"Sport", "Example values: wrestling, rowing"},
                            {"Event", "Example values: heavyweight greco-roman"}}),
      "What was the nickname of the gold medal winner in the men's heavyweight greco-roman "
      "wrestling event?",
      "The question wants a nickname, but the table only stores medal, name, sport and event. "
      "No column can fill the SELECT clause for nicknames."));
  shots.push_back(make_shot(
      C::NonexistentSelectColumn,
      table_md("airports", {{"AirportCode", "Example values: AKO, ALS"},
                            {"Country", "Example values: United States"},
                            {"City", "Example values: Akron, Alamosa"}}),
      "What is the airport name for airport 'AKO'?",
      "The schema records code, country and city but no airport name column. The requested "
      "output information is missing from the schema."));

  // -- Nonexistent WHERE column ---------------------------------------------
  shots.push_back(make_shot(
      C::NonexistentWhereColumn,
      table_md("teams", {{"Team_Name", "Example values: Redruth, Camborne"},
                         {"Ground", "Example values: Recreation Ground"},
                         {"Town_Name", "Example values: Redruth, Camborne"}}),
      "Which team comes from a town that is known for its tin mining?",
      "Filtering requires information about tin mining, but no column stores anything about "
      "mining. The filter column simply does not exist, and no other column defines the term."));
  shots.push_back(make_shot(
      C::NonexistentWhereColumn,
      table_md("country", {{"Code", "Example values: CHN, FRA"},
                           {"Name", "Example values: China, France"},
                           {"Region", "Example values: Eastern Asia, Caribbean"},
                           {"SurfaceArea", "Example values: 9572900, 551500"}}),
      "What is the total surface area of the continents Asia and Europe?",
      "The aggregation target SurfaceArea exists, but the filter needs a continent column and "
      "the table only has Region. The WHERE column is missing from the schema."));
  shots.push_back(make_shot(
      C::NonexistentWhereColumn,
      table_md("employees", {{"Emp_ID", "Example values: 3, 4"},
                             {"Name", "Example values: Mei Tan, Jon Reese"},
                             {"Salary", "Example values: 51000, 64000"}}),
      "How many employees joined the company before 2010?",
      "Answering requires a hire or join date to filter on, and no such column exists. The "
      "filter condition cannot be expressed against this schema."));

  // -- Nonexistent filter value ---------------------------------------------
  shots.push_back(make_shot(
      C::NonexistentFilterValue,
      table_md("car_makers", {{"Id", "Example values: 1, 2"},
                              {"FullName", "Example values: Triumph, Ford Motor Company"},
                              {"Country", "Example values: UK, USA"}}) +
          "\n\n### Relevant values\n\"car_makers.FullName\": [\"Triumph\", \"Ford Motor "
          "Company\", \"General Motors\"]",
      "How many car models were produced by the maker with full name American Motor Company?",
      "The filter value \"American Motor Company\" does not occur among the FullName values; "
      "the retrieved values show other makers only. The mentioned value is absent from the "
      "database."));
  shots.push_back(make_shot(
      C::NonexistentFilterValue,
      table_md("teams", {{"Team_Name", "Example values: Redruth, Camborne"},
                         {"Ground", "Example values: Recreation Ground, Memorial Park"}}) +
          "\n\n### Relevant values\n\"teams.Team_Name\": [\"Redruth\", \"Camborne\"]",
      "What is the ground name of New York Yankees?",
      "No row of Team_Name holds \"New York Yankees\"; the stored team names are different. The "
      "question filters on a value that is not present."));
  shots.push_back(make_shot(
      C::NonexistentFilterValue,
      table_md("singer", {{"Name", "Example values: Rosa Linden, Omar Reyes"},
                          {"Country", "Example values: France, Spain"}}) +
          "\n\n### Relevant values\n\"singer.Country\": [\"France\", \"Spain\", \"Italy\"]",
      "How many singers are from Iceland?",
      "The Country column contains France, Spain and Italy but no Iceland. The filter value is "
      "missing, so the query would be empty by construction."));

  // -- Unsupported join -------------------------------------------------------
  shots.push_back(make_shot(
      C::UnsupportedJoin,
      table_md("students", {{"Student_ID", "Example values: 1, 2"},
                            {"Name", "Example values: Ida Beck, Tom Low"}}) +
          "\n\n" +
          table_md("library", {{"library_id", "Example values: 1, 2"},
                               {"library_name", "Example values: XYZ, Central"}}) +
          "\n\n" +
          table_md("books", {{"book_id", "Example values: 1, 2"},
                             {"library_id", "Example values: 1, 1"},
                             {"title", "Example values: ABC, On Rivers"}}) +
          "\n\nForeign_keys = [books.library_id = library.library_id]",
      "Which student borrowed the book titled 'ABC' from the library 'XYZ'?",
      "Answering needs a join between students and the library/books tables, but the only "
      "foreign key connects books to library. There is no key linking students to either table, "
      "so the required join is unsupported."));
  shots.push_back(make_shot(
      C::UnsupportedJoin,
      table_md("singer", {{"Singer_ID", "Example values: 1, 2"},
                          {"Name", "Example values: Rosa Linden, Omar Reyes"}}) +
          "\n\n" +
          table_md("albums", {{"albumId", "Example values: 1, 2"},
                              {"singerId", "Example values: 1, 2"},
                              {"albumName", "Example values: Midnight Road, Golden Hour"}}) +
          "\n\n" +
          table_md("songs", {{"songId", "Example values: 1, 2"},
                             {"albumId", "Example values: 1, 1"},
                             {"songName", "Example values: Night Drive, Dawn"}}) +
          "\n\nForeign_keys = [songs.albumId = albums.albumId]",
      "What is the name of the singer whose album is 'Thriller'?",
      "The albums table is connected to songs but not to singer; albums.singerId has no foreign "
      "key to singer. Joining singer with albums is not supported by the schema."));
  shots.push_back(make_shot(
      C::UnsupportedJoin,
      table_md("customers", {{"customer_id", "Example values: 9, 10"},
                             {"name", "Example values: Lena Park, Gil Soto"}}) +
          "\n\n" +
          table_md("warehouse", {{"warehouse_id", "Example values: 1"},
                                 {"city", "Example values: Easton"}}) +
          "\n\n" +
          table_md("shelf", {{"shelf_id", "Example values: 1, 2"},
                             {"warehouse_id", "Example values: 1, 1"},
                             {"label", "Example values: B4, C1"}}) +
          "\n\nForeign_keys = [shelf.warehouse_id = warehouse.warehouse_id]",
      "Which customer ordered an item stored on shelf 'B4'?",
      "The customers table has no key relating it to warehouse or shelf; only shelf and "
      "warehouse are connected. The join needed to answer is impossible."));

  // -- Answerable --------------------------------------------------------------
  shots.push_back(make_shot(
      C::Answerable,
      table_md("singer", {{"Singer_ID", "Example values: 1, 2"},
                          {"Name", "Example values: Rosa Linden, Omar Reyes"},
                          {"Country", "Example values: France, Spain"}}),
      "How many singers do we have?",
      "Counting rows of the singer table answers the question directly. There is exactly one "
      "reading and the data is present, so it is answerable."));
  shots.push_back(make_shot(
      C::Answerable,
      table_md("stadium", {{"Name", "Example values: Harbor Park, Riverside Arena"},
                           {"Capacity", "Example values: 57296, 52000"}}),
      "What is the maximum capacity of all stadiums?",
      "There is a single Capacity column, so max(Capacity) is the one valid interpretation. All "
      "needed data exists."));
  shots.push_back(make_shot(
      C::Answerable,
      table_md("orders", {{"order_id", "Example values: 7001, 7002"},
                          {"order_year", "Example values: 2022, 2023"},
                          {"total_amount", "Example values: 49.9, 1220.0"}}),
      "List the order ids placed in 2023.",
      "order_year stores the year and order_id the identifier; a simple equality filter on 2023 "
      "answers the question unambiguously."));

  return shots;
}

}  // namespace

const std::vector<Shot>& builtin_shots() {
  static const std::vector<Shot> shots = build_shots();
  return shots;
}

}  // namespace practiq::bench
