#include "mock_corpus.hpp"

#include <array>
#include <utility>

namespace alo::gateway::corpus {

namespace {

constexpr std::string_view kCat = R"(# ALO: {name}

## subObjList

### body
- skills:
  - pounce: jump(height=1.2)
  - meow: emit(event=meow)
  - chase: seek(speed=16, target=roomba)
  - nap: idle()
- knowledge:
  - A cat is a small and quick animal that often explores the room.
  - A cat always lands on its feet after a jump.
  - A cat makes a meow sound when it wants attention from people.
  - A cat uses its whiskers to find its way in a dark space.
- states:
  - age: scalar in [0, 30] = 3 years
  - awake: boolean = yes
  - energy: scalar in [0, 100] = 80 percent
  - mood: label {calm, playful, scared} = playful

## managerObj
- currentState: idle
- stateSet: idle, hunting, resting
- rewardAccumulator: 0
- policy:
  - when env.boundary_contact == yes -> meow
  - when env.nearest_distance < 2 -> pounce
  - when body.energy < 10 -> nap => resting
  - always -> chase => hunting

## stepObjList

## interactions
)";

constexpr std::string_view kRoomba = R"(# ALO: {name}

## subObjList

### chassis
- skills:
  - drive: move(speed=5)
  - turn: rotate(rate=1.5)
  - escape: flee(radius=10, speed=10)
  - clean: wander(speed=4, turn=1)
- knowledge:
  - A roomba is a small robot that helps people clean the floor.
  - A roomba turns around when it touches a wall.
  - A roomba can move fast to avoid an animal that comes close.
- states:
  - battery: scalar in [0, 100] = 90 percent
  - bin_full: boolean = no

### sensors
- knowledge:
  - Bump sensors tell the robot when it reaches the edge of the room.
- states:
  - bumper: boolean = no
  - cliff: boolean = no

## managerObj
- currentState: cleaning
- stateSet: cleaning, turning, escaping
- rewardAccumulator: 0
- policy:
  - when env.boundary_contact == yes -> turn => turning
  - always -> clean => cleaning

## stepObjList

## interactions
)";

constexpr std::string_view kWorld = R"(# ALO: {name}

## subObjList

### ground
- knowledge:
  - The ground is a large flat surface where every object rests.
  - Gravity pulls every object down toward the ground.
- states:
  - gravity: scalar in [0, 20] = 9.8 m_per_s2
  - width: scalar in [0, 1000] = 100 units
  - depth: scalar in [0, 1000] = 100 units

### sky
- knowledge:
  - The sky is a large open space above the ground.
- states:
  - color: label {blue, grey, black} = blue
  - height: scalar in [0, 1000] = 100 units

## managerObj
- currentState: stable
- stateSet: stable
- rewardAccumulator: 0

## stepObjList

## interactions
)";

constexpr std::string_view kCatMeetsRoomba = R"(# ALO: {name}

## subObjList

### encounter
- skills:
  - observe: idle()
- knowledge:
  - The cat often chases the roomba around the room.
  - The roomba tries to avoid the cat when the cat comes close.
  - Both objects stay inside the bounded world.
- states:
  - distance_threshold: scalar in [0, 100] = 10 units

## managerObj
- currentState: apart
- stateSet: apart, close
- rewardAccumulator: 0
- policy:
  - always -> observe

## stepObjList

## interactions
- avoid_cat: pair(cat, roomba) radius=10 responder=second skill=escape
)";

constexpr std::string_view kTeacher = R"(# ALO: {name}

## subObjList

### voice
- skills:
  - teach: emit(event=teach)
  - pace: wander(speed=0.5, turn=0.5)
- knowledge:
  - A teacher helps students learn new ideas.
  - A good teacher asks a question and waits for an answer.
- states:
  - experience: scalar in [0, 50] = 10 years
  - subject: label {math, science, art} = math
  - style: label {inquiry, direct, blended} = inquiry

## managerObj
- currentState: lecturing
- stateSet: lecturing, listening
- rewardAccumulator: 0
- policy:
  - when state == lecturing -> teach => listening
  - always -> pace => lecturing

## stepObjList

## interactions
)";

constexpr std::string_view kStudent = R"(# ALO: {name}

## subObjList

### mind
- skills:
  - answer: emit(event=answer)
  - listen: idle()
- knowledge:
  - A student learns by listening and asking questions.
  - A student often works with other students in small groups.
- states:
  - age: scalar in [5, 25] = 15 years
  - attendance: scalar in [0, 100] = 95 percent
  - engaged: boolean = yes

## managerObj
- currentState: listening
- stateSet: listening, answering
- rewardAccumulator: 0
- policy:
  - when env.heard == teach -> answer => answering
  - always -> listen => listening

## stepObjList

## interactions
)";

constexpr std::string_view kClassroom = R"(# ALO: {name}

## subObjList

### room
- knowledge:
  - The classroom has a whiteboard, a projector and two shelves.
  - The room is a comfortable space with good lighting.
- states:
  - capacity: scalar in [0, 100] = 25 students
  - temperature: scalar in [0, 40] = 22 celsius
  - lighting: label {dim, adequate, bright} = adequate
  - noise: label {low, medium, high} = low

## managerObj
- currentState: in_session
- stateSet: in_session, empty
- rewardAccumulator: 0

## stepObjList

## interactions
)";

constexpr std::string_view kTeacherTeachesStudent = R"(# ALO: {name}

## subObjList

### lesson
- skills:
  - observe: idle()
- knowledge:
  - The teacher asks a question and the student gives an answer.
  - The teacher helps the student when the student needs support.
- states:
  - students: scalar in [0, 100] = 25 students

## managerObj
- currentState: teaching
- stateSet: teaching
- rewardAccumulator: 0
- policy:
  - always -> observe

## stepObjList

## interactions
- lesson_reply: pair(teacher, student) radius=30 responder=second skill=answer
)";

constexpr std::string_view kSmartphone = R"(# ALO: {name}

## subObjList

### battery
- knowledge:
  - The battery supports fast charging and wireless charging.
- states:
  - capacity: scalar in [0, 10000] = 4500 mAh
  - charging_speed: scalar in [0, 200] = 65 W

### display
- states:
  - size: scalar in [0, 10] = 6.1 inches
  - refresh_rate: scalar in [0, 240] = 60 Hz

### processor
- states:
  - clock_speed: scalar in [0, 5] = 2.8 GHz
  - ram: scalar in [0, 32] = 8 GB

### connectivity
- skills:
  - send_job: emit(event=print_job)
- states:
  - wifi: label {wifi5, wifi6} = wifi6
  - nfc: boolean = yes

## managerObj
- currentState: idle
- stateSet: idle, printing
- rewardAccumulator: 0
- policy:
  - when state == printing -> send_job => idle

## stepObjList

## interactions
)";

constexpr std::string_view kPrinter = R"(# ALO: {name}

## subObjList

### engine
- skills:
  - print: emit(event=page)
- knowledge:
  - The inkjet printer supports automatic duplex printing.
- states:
  - print-speed: scalar in [0, 60] = 15 ppm
  - dpi: scalar in [0, 4800] = 1200
  - input_capacity: scalar in [0, 500] = 150 sheets

### panel
- states:
  - button_count: scalar in [0, 20] = 6

## managerObj
- currentState: ready
- stateSet: ready, printing
- rewardAccumulator: 0
- policy:
  - when env.heard == print_job -> print => printing
  - when state == printing -> print => ready

## stepObjList

## interactions
)";

constexpr std::string_view kRouter = R"(# ALO: {name}

## subObjList

### radio
- skills:
  - broadcast: emit(event=beacon)
- knowledge:
  - The router uses beamforming to reach devices in a large area.
- states:
  - max_data_rate: scalar in [0, 10000] = 6000 Mbps
  - bandwidth: scalar in [0, 320] = 160 MHz
  - coverage: scalar in [0, 10000] = 3000 sq_ft
  - antennas: scalar in [0, 16] = 4

### processor
- states:
  - clock_speed: scalar in [0, 5] = 1.4 GHz
  - ram: scalar in [0, 4096] = 512 MB

## managerObj
- currentState: online
- stateSet: online, offline
- rewardAccumulator: 0
- policy:
  - always -> broadcast

## stepObjList

## interactions
)";

constexpr std::string_view kSmartphoneConnectsToPrinter = R"(# ALO: {name}

## subObjList

### link
- skills:
  - observe: idle()
- knowledge:
  - The smartphone connects to the printer through the WiFi network.
  - The smartphone sends a print job and the printer makes a page.
- states:
  - connected: boolean = yes

## managerObj
- currentState: linked
- stateSet: linked, unlinked
- rewardAccumulator: 0
- policy:
  - always -> observe

## stepObjList

## interactions
- print_request: pair(smartphone, printer) radius=50 responder=second skill=print
)";

constexpr std::array<std::pair<std::string_view, std::string_view>, 15> kDocuments = {{
    {"cat", kCat},
    {"roomba", kRoomba},
    {"roombarobotcleaner", kRoomba},
    {"3dphysicalworld", kWorld},
    {"bounded3dphysicalworld", kWorld},
    {"catmeetsroomba", kCatMeetsRoomba},
    {"teacher", kTeacher},
    {"student", kStudent},
    {"classroom", kClassroom},
    {"teacherteachesstudent", kTeacherTeachesStudent},
    {"smartphone", kSmartphone},
    {"printer", kPrinter},
    {"wifirouter", kRouter},
    {"router", kRouter},
    {"smartphoneconnectstoprinter", kSmartphoneConnectsToPrinter},
}};

constexpr std::array<std::pair<std::string_view, std::string_view>, 6> kTables = {{
    {"printer", R"(| Subobject | Parameter | Value |
|-----------|-----------|-------|
| Print engine | Type | Inkjet |
| Print engine | Color print speed | 10 ppm |
| Print engine | Mono print speed | 15 ppm |
| Print engine | Color resolution | 4800x1200 dpi |
| Paper handling | Input capacity | 150 sheets |
| Paper handling | Output capacity | 50 sheets |
| Paper handling | Duplex printing | yes |
| Panel | LCD size | 2.7 inches |
| Connectivity | WiFi | yes |
| Connectivity | Ethernet | yes |
| Body | Weight | 14.3 lbs |)"},
    {"smartphone", R"(| Subobject | Parameter | Value |
|-----------|-----------|-------|
| Display | Size | 6.1 inches |
| Display | Type | AMOLED |
| Display | Resolution | 1080x2400 |
| Display | Refresh rate | 60 Hz |
| Processor | Chipset | Snapdragon 888 |
| Battery | Capacity | 4500mAh |
| Battery | Charging speed | 65 W |
| Battery | Wireless charging | yes |
| Camera | Rear main | 64 MP |
| Memory | RAM | 8 GB |
| Memory | Storage | 128 GB |
| Body | Weight | 190 g |)"},
    {"wifirouter", R"(| Subobject | Parameter | Value |
|-----------|-----------|-------|
| Processor | Clock speed | 1.4 GHz |
| Processor | RAM | 512 MB |
| Wireless | Standard | WiFi 6 |
| Wireless | Max data rate | 6000 Mbps |
| Wireless | Bandwidth | 160 MHz |
| Wireless | Antennas | 4 |
| Security | WPA3 | yes |
| Ports | LAN ports | 4 |
| Coverage | Area | 3000 sq ft |
| Body | Weight | 1.5 lbs |)"},
    {"classroom", R"(| Subobject | Parameter | Value |
|-----------|-----------|-------|
| Room | Capacity | 25 students |
| Room | Temperature | 22 celsius |
| Room | Lighting | adequate |
| Room | Noise level | low |
| Furniture | Tables | 25 |
| Furniture | Whiteboard | yes |
| Equipment | Projector | yes |
| Materials | Textbooks | science textbooks for every student |)"},
    {"student", R"(| Subobject | Parameter | Value |
|-----------|-----------|-------|
| Profile | Age | 15 years |
| Profile | Languages | English and Spanish |
| Academics | Attendance | 95% |
| Academics | Test score | 80% |
| Academics | Homework completion | 90% |
| Skills | Collaboration | advanced |
| Interests | Hobbies | math, painting, soccer |
| Learning | Preferred style | visual |)"},
    {"teacher", R"(| Subobject | Parameter | Value |
|-----------|-----------|-------|
| Profile | Age | 35 years |
| Profile | Degree | Master of Education |
| Experience | Years teaching | 10 years |
| Experience | Grades taught | 6-8 |
| Skills | Communication | expert |
| Style | Approach | inquiry-based |
| Style | Blended learning | yes |)"},
}};

}  // namespace

std::string key_of(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c >= 'A' && c <= 'Z') out += static_cast<char>(c - 'A' + 'a');
    else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) out += c;
  }
  return out;
}

std::optional<std::string_view> alo_document(std::string_view key) {
  for (const auto& [k, doc] : kDocuments)
    if (k == key) return doc;
  return std::nullopt;
}

std::string generic_document(const std::string& name) {
  return "# ALO: " + name +
         R"(

## subObjList

### body
- skills:
  - rest: idle()
  - roam: wander(speed=3, turn=1)
- knowledge:
  - The )" + name + R"( is an object that exists in the world.
  - The )" + name + R"( can move around the area and rest when needed.
- states:
  - active: boolean = yes
  - energy: scalar in [0, 100] = 100 percent

## managerObj
- currentState: idle
- stateSet: idle, roaming
- rewardAccumulator: 0
- policy:
  - always -> roam => roaming

## stepObjList

## interactions
)";
}

std::string parameter_table(const std::string& name) {
  std::string key = key_of(name);
  for (const auto& [k, table] : kTables)
    if (k == key) return std::string(table);
  return "| Subobject | Parameter | Value |\n"
         "|-----------|-----------|-------|\n"
         "| Body | Size | 1 m |\n"
         "| Body | Color | grey |\n"
         "| Body | Weight | 10 kg |\n"
         "| Behavior | Active | yes |\n"
         "| Behavior | Description | a typical " + name + " found in everyday life |";
}

std::string brainstorm_notes(const std::string& name) {
  return "1. Identify the main object: ALOs(" + name + ").\n"
         "2. List the components that make up the " + name + ".\n"
         "3. For each component, list the parameters that describe it.\n"
         "4. Fill each parameter with a typical value and unit.\n"
         "5. Add skills the " + name + " can perform and the knowledge it holds.\n"
         "6. Check that every value is consistent with the others.";
}

const std::vector<std::string_view>& prose_bank() {
  static const std::vector<std::string_view> bank = {
      "{topic} is an important idea that many people think about in different ways.",
      "Some people believe that {topic} shows how simple things can hold great meaning.",
      "In everyday life, {topic} often appears in small but significant moments.",
      "Scientists and writers have tried to explain {topic} for a long time.",
      "A common view is that {topic} helps people find purpose and direction.",
      "Many cultures give {topic} a special place in stories and traditions.",
      "It is easy to overlook {topic}, yet it shapes the world around us.",
      "When we study {topic} closely, we discover many different layers.",
      "Some describe {topic} as rich and complex, while others see it as plain.",
      "The history of {topic} shows how ideas grow and change over time.",
      "People often ask what {topic} really is and why it matters.",
      "One simple answer is that {topic} gives life a sense of order.",
      "Another answer is that {topic} is whatever each person makes of it.",
      "Children usually learn about {topic} through play and questions.",
      "Adults frequently think about {topic} when they face big choices.",
      "In science, {topic} can be measured, tested and compared.",
      "In art, {topic} is shown through color, shape and sound.",
      "Many experts consider {topic} essential to a good life.",
      "The way we talk about {topic} reveals what we value most.",
      "Over many years, the meaning of {topic} has become more diverse.",
      "Some people find {topic} in quiet moments, others in busy places.",
      "A careful look at {topic} uses both reason and feeling.",
      "It is fair to say that {topic} connects people across the planet.",
      "Questions about {topic} rarely have a single correct response.",
      "Still, talking about {topic} helps us understand each other.",
      "Many books begin with a simple question about {topic}.",
      "The best way to learn about {topic} is to observe and reflect.",
      "In the end, {topic} remains a rich source of wonder for everyone.",
  };
  return bank;
}

const std::vector<std::string_view>& chatter_bank() {
  static const std::vector<std::string_view> bank = {
      "Here is the result you asked for, written as a simple GPT markdown script.",
      "I followed each step in order and kept every feature of the object.",
      "Each part is shown below so it is easy to read and change later.",
      "Let me know if you want to add more skills or different states.",
      "You can use this script as a good starting point for a simulation.",
      "I kept the names short so other objects can reference them.",
  };
  return bank;
}

const std::vector<std::vector<std::string_view>>& synonym_groups() {
  static const std::vector<std::vector<std::string_view>> groups = {
      {"small", "little", "tiny", "compact"},
      {"large", "big", "huge", "sizable"},
      {"quick", "fast", "rapid", "swift"},
      {"move", "travel", "go", "proceed"},
      {"avoid", "evade", "dodge", "elude"},
      {"room", "space", "area", "chamber"},
      {"floor", "ground", "surface"},
      {"often", "frequently", "regularly", "usually"},
      {"always", "consistently", "invariably"},
      {"helps", "assists", "aids", "supports"},
      {"important", "essential", "vital", "crucial"},
      {"shows", "displays", "exhibits", "demonstrates"},
      {"uses", "employs", "utilizes"},
      {"makes", "creates", "produces", "generates"},
      {"many", "numerous", "several", "various"},
      {"good", "fine", "great", "excellent"},
      {"people", "humans", "individuals", "persons"},
      {"world", "planet", "earth"},
      {"meaning", "purpose", "significance", "sense"},
      {"find", "discover", "uncover", "locate"},
      {"think", "believe", "consider", "reflect"},
      {"answer", "response", "reply"},
      {"question", "query", "inquiry"},
      {"simple", "easy", "basic", "plain"},
      {"different", "distinct", "diverse", "varied"},
      {"idea", "notion", "concept", "thought"},
      {"life", "existence", "living"},
      {"rich", "abundant", "plentiful"},
      {"learn", "study", "master"},
      {"understand", "grasp", "comprehend"},
      {"explain", "describe", "clarify"},
      {"change", "shift", "evolve"},
      {"long", "extended", "lengthy"},
      {"common", "typical", "ordinary"},
      {"special", "unique", "particular"},
      {"stories", "tales", "narratives"},
      {"moments", "instants", "occasions"},
      {"significant", "notable", "meaningful"},
      {"careful", "thorough", "attentive"},
      {"object", "item", "thing"},
      {"robot", "machine", "automaton"},
      {"animal", "creature", "beast"},
      {"wants", "desires", "seeks"},
      {"close", "near", "nearby"},
      {"reaches", "touches", "hits"},
      {"tries", "attempts", "strives"},
  };
  return groups;
}

}  // namespace alo::gateway::corpus
