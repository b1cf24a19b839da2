"""Regenerate every committed fixture file in this directory.

Run from the repository root:

    python3 tests/fixtures/generate.py

All randomness is seeded, so reruns are byte-stable. The script asserts
the structural properties the fixtures promise (valid checksums, unique
fingerprints, tree shape) so a bad edit here fails fast instead of
surfacing as a confusing test failure later.
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

FIXTURES = Path(__file__).resolve().parent
sys.path.insert(0, str(FIXTURES.parent))

from oracles import (  # noqa: E402
    issn_checksum_ok,
    orcid_checksum_ok,
    random_valid_issn,
    random_valid_orcid,
    random_valid_ror,
    ror_checksum_ok,
)


def write_jsonl(path: Path, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    print(f"wrote {path.name}: {len(rows)} lines")


# --- ISSN pool and linking table --------------------------------------

rng_issn = random.Random(0xA11CE)
ISSN_POOL: list[str] = []
seen_issns: set[str] = set()
while len(ISSN_POOL) < 60:
    issn = random_valid_issn(rng_issn)
    if issn not in seen_issns:
        seen_issns.add(issn)
        ISSN_POOL.append(issn)

# Venues used across the corpora. Groups of 2-3 ISSNs model print+online
# editions; single-ISSN venues marked linked=False stay out of the
# linking table on purpose to exercise the fallback-singleton path.
VENUES = [
    {"name": "Journal of Synthetic Scholarship", "issns": ISSN_POOL[0:3], "linked": True},
    {"name": "Annals of Graph Methods", "issns": ISSN_POOL[3:5], "linked": True},
    {"name": "Data Curation Quarterly", "issns": ISSN_POOL[5:7], "linked": True},
    {"name": "Review of Computational Biology", "issns": ISSN_POOL[7:9], "linked": True},
    {"name": "Proceedings of the Indexing Symposium", "issns": ISSN_POOL[9:10], "linked": False},
    {"name": "Bulletin of Metadata Studies", "issns": ISSN_POOL[10:11], "linked": False},
    {"name": "Archive of Applied Taxonomies", "issns": ISSN_POOL[11:13], "linked": True},
    {"name": "Transactions on Citation Analysis", "issns": ISSN_POOL[13:15], "linked": True},
    {"name": "Letters in Open Infrastructure", "issns": ISSN_POOL[15:16], "linked": False},
    {"name": "Quarterly of Scholarly Systems", "issns": ISSN_POOL[16:18], "linked": True},
    {"name": "Journal of Name Disambiguation", "issns": ISSN_POOL[18:19], "linked": False},
    {"name": "Studies in Version Control", "issns": ISSN_POOL[19:21], "linked": True},
    {"name": "Workshop Notes on Retrieval", "issns": ISSN_POOL[21:22], "linked": False},
    {"name": "Gazette of Research Registries", "issns": ISSN_POOL[22:24], "linked": True},
]

# Extra linking groups nobody references, so the table is bigger than
# the active corpus.
EXTRA_GROUPS = [ISSN_POOL[24:27], ISSN_POOL[27:29], ISSN_POOL[29:31], ISSN_POOL[31:32]]


def emit_issn_linking() -> None:
    lines = ["ISSN,ISSN-L"]
    for venue in VENUES:
        if not venue["linked"]:
            continue
        issn_l = venue["issns"][0]
        for issn in venue["issns"]:
            lines.append(f"{issn},{issn_l}")
    for group in EXTRA_GROUPS:
        for issn in group:
            lines.append(f"{issn},{group[0]}")
    path = FIXTURES / "issn_linking.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path.name}: {len(lines) - 1} rows")


# --- concept trees ----------------------------------------------------

TOY_TREE = [
    {"id": "C1", "wikidata": "Q101", "display_name": "Computer science", "level": 0, "parents": [], "keywords": []},
    {"id": "C2", "wikidata": "Q102", "display_name": "Biology", "level": 0, "parents": [], "keywords": []},
    {"id": "C3", "wikidata": "Q103", "display_name": "Graph theory", "level": 1, "parents": ["C1"], "keywords": ["graph"]},
    {"id": "C4", "wikidata": "Q104", "display_name": "Machine learning", "level": 1, "parents": ["C1"], "keywords": ["learning", ["model", 0.5]]},
    {"id": "C5", "wikidata": "Q105", "display_name": "Information retrieval", "level": 1, "parents": ["C1"], "keywords": ["retrieval", ["search", 0.8]]},
    {"id": "C6", "wikidata": "Q106", "display_name": "Databases", "level": 1, "parents": ["C1"], "keywords": ["database", ["query", 0.8]]},
    {"id": "C7", "wikidata": "Q107", "display_name": "Genomics", "level": 1, "parents": ["C2"], "keywords": ["genome", ["gene", 0.9]]},
    {"id": "C8", "wikidata": "Q108", "display_name": "Ecology", "level": 1, "parents": ["C2"], "keywords": ["ecology", ["ecosystem", 0.9]]},
    {"id": "C9", "wikidata": "Q109", "display_name": "Deep learning", "level": 2, "parents": ["C4"], "keywords": ["neural", ["deep", 0.7]]},
    {"id": "C10", "wikidata": "Q110", "display_name": "Network science", "level": 2, "parents": ["C3"], "keywords": [["network", 0.9]]},
    {"id": "C11", "wikidata": "Q111", "display_name": "Bioinformatics", "level": 1, "parents": ["C1", "C2"], "keywords": ["bioinformatics", ["sequence", 0.6]]},
    {"id": "C12", "wikidata": "Q112", "display_name": "Text mining", "level": 2, "parents": ["C5"], "keywords": [["text", 0.8], ["mining", 0.9]]},
]


def emit_tree_toy() -> None:
    write_jsonl(FIXTURES / "tree_toy.jsonl", TOY_TREE)


ROOT_NAMES = [
    "Formal systems", "Applied mechanics", "Cell studies", "Field ecology",
    "Materials research", "Signal engineering", "Computation", "Statistical methods",
    "Earth observation", "Chemical synthesis", "Clinical practice", "Social dynamics",
    "Economic behavior", "Language studies", "Historical analysis", "Design theory",
    "Energy systems", "Cognitive research", "Measurement science",
]


def emit_tree_full_shape() -> None:
    """Exactly 19 roots, levels 0..5, a bit over 500 concepts."""
    rng = random.Random(0x7EE5)
    rows: list[dict] = []
    serial = 0
    per_level: list[list[str]] = []

    def add(level: int, parents: list[str], name: str, keywords: list) -> str:
        nonlocal serial
        serial += 1
        cid = f"C{serial}"
        rows.append(
            {
                "id": cid,
                "wikidata": f"Q{10000 + serial}",
                "display_name": name,
                "level": level,
                "parents": parents,
                "keywords": keywords,
            }
        )
        return cid

    roots = [add(0, [], name, []) for name in ROOT_NAMES]
    per_level.append(roots)
    sizes = [57, 130, 150, 105, 65]  # levels 1..5
    for level, size in enumerate(sizes, start=1):
        layer: list[str] = []
        for i in range(size):
            n_parents = 1 if rng.random() < 0.8 else 2
            parents = rng.sample(per_level[level - 1], min(n_parents, len(per_level[level - 1])))
            keywords = []
            for _ in range(rng.randint(1, 2)):
                keywords.append([f"tok{rng.randint(0, 1500)}", round(rng.uniform(0.4, 1.0), 2)])
            layer.append(add(level, sorted(parents, key=lambda c: int(c[1:])), f"Synthetic topic {serial + 1}", keywords))
        per_level.append(layer)

    assert len(per_level[0]) == 19
    assert max(r["level"] for r in rows) == 5
    assert len(rows) >= 500, len(rows)
    write_jsonl(FIXTURES / "tree_full_shape.jsonl", rows)


# --- institutions and labeled affiliations ----------------------------

INSTITUTIONS = [
    ("University of Granada", [], "ES"),
    ("University of Helsinki", [], "FI"),
    ("University of Cape Town", [], "ZA"),
    ("Stanford University", ["Stanford"], "US"),
    ("Massachusetts Institute of Technology", ["MIT"], "US"),
    ("California Institute of Technology", ["Caltech"], "US"),
    ("University of Oxford", [], "GB"),
    ("University of Cambridge", [], "GB"),
    ("Imperial College London", [], "GB"),
    ("University College London", ["UCL"], "GB"),
    ("Sorbonne University", [], "FR"),
    ("Grenoble Institute of Statistics", [], "FR"),
    ("Max Planck Institute for Astronomy", [], "DE"),
    ("Max Planck Institute for Informatics", [], "DE"),
    ("Heidelberg University", [], "DE"),
    ("Technical University of Munich", ["TUM"], "DE"),
    ("ETH Zurich", ["Swiss Federal Institute of Technology Zurich"], "CH"),
    ("University of Zurich", [], "CH"),
    ("Uppsala University", [], "SE"),
    ("Karolinska Institute", [], "SE"),
    ("University of Copenhagen", [], "DK"),
    ("Aarhus University", [], "DK"),
    ("University of Amsterdam", [], "NL"),
    ("Delft University of Technology", ["TU Delft"], "NL"),
    ("KU Leuven", [], "BE"),
    ("University of Vienna", [], "AT"),
    ("Charles University", [], "CZ"),
    ("Jagiellonian University", [], "PL"),
    ("Lomonosov Moscow State University", ["Moscow State University"], "RU"),
    ("University of Tokyo", ["Tokyo University"], "JP"),
    ("Kyoto University", [], "JP"),
    ("Seoul National University", [], "KR"),
    ("Tsinghua University", [], "CN"),
    ("Peking University", [], "CN"),
    ("Fudan University", [], "CN"),
    ("National University of Singapore", ["NUS"], "SG"),
    ("University of Melbourne", [], "AU"),
    ("Australian National University", ["ANU"], "AU"),
    ("University of Auckland", [], "NZ"),
    ("University of Toronto", [], "CA"),
    ("McGill University", [], "CA"),
    ("University of British Columbia", ["UBC"], "CA"),
    ("University of São Paulo", ["Universidade de São Paulo"], "BR"),
    ("University of Buenos Aires", [], "AR"),
    ("University of Nairobi", [], "KE"),
    ("Cairo University", [], "EG"),
    ("Indian Institute of Science", ["IISc"], "IN"),
    ("Indian Institute of Technology Bombay", ["IIT Bombay"], "IN"),
    ("Weizmann Institute of Science", [], "IL"),
    ("Scripps Research Institute", ["Scripps Research"], "US"),
]


def emit_institutions() -> dict[str, str]:
    rng = random.Random(0x50C1E7)
    rows = []
    rors: dict[str, str] = {}
    used: set[str] = set()
    for name, aliases, country in INSTITUTIONS:
        ror = random_valid_ror(rng)
        while ror in used:
            ror = random_valid_ror(rng)
        used.add(ror)
        assert ror_checksum_ok(ror)
        rors[name] = ror
        rows.append(
            {"ror": ror, "display_name": name, "aliases": aliases, "country_code": country}
        )
    assert len(rows) == 50
    write_jsonl(FIXTURES / "institutions_toy.jsonl", rows)
    return rors


def emit_affiliations(rors: dict[str, str]) -> None:
    """100 labeled affiliation strings.

    `expected` is the list of RORs a careful human would assign; the label
    comes from how each string was constructed, not from running the
    matcher. The `hard` block contains typos and heavy abbreviations the
    matcher is allowed to miss.
    """
    r = rors
    cases: list[dict] = []

    def case(raw: str, names: list[str], kind: str) -> None:
        cases.append({"raw": raw, "expected": [r[n] for n in names], "kind": kind})

    # Plain exact mentions with address tails.
    exact_pairs = [
        ("University of Granada, 18071 Granada, Spain", "University of Granada"),
        ("University of Helsinki, FI-00014 Helsinki, Finland", "University of Helsinki"),
        ("University of Cape Town, Rondebosch 7701, South Africa", "University of Cape Town"),
        ("Stanford University, Stanford, CA 94305, USA", "Stanford University"),
        ("University of Oxford, Oxford OX1 2JD, United Kingdom", "University of Oxford"),
        ("University of Cambridge, Cambridge, UK", "University of Cambridge"),
        ("Imperial College London, London SW7 2AZ, UK", "Imperial College London"),
        ("Sorbonne University, 75005 Paris, France", "Sorbonne University"),
        ("Heidelberg University, 69117 Heidelberg, Germany", "Heidelberg University"),
        ("University of Zurich, 8006 Zurich, Switzerland", "University of Zurich"),
        ("Uppsala University, 75105 Uppsala, Sweden", "Uppsala University"),
        ("Karolinska Institute, Solna, Sweden", "Karolinska Institute"),
        ("University of Copenhagen, 1165 Copenhagen, Denmark", "University of Copenhagen"),
        ("Aarhus University, 8000 Aarhus, Denmark", "Aarhus University"),
        ("University of Amsterdam, 1012 WP Amsterdam, The Netherlands", "University of Amsterdam"),
        ("KU Leuven, 3000 Leuven, Belgium", "KU Leuven"),
        ("University of Vienna, 1010 Vienna, Austria", "University of Vienna"),
        ("Charles University, 11000 Prague, Czech Republic", "Charles University"),
        ("Jagiellonian University, 31007 Krakow, Poland", "Jagiellonian University"),
        ("Kyoto University, Kyoto 606-8501, Japan", "Kyoto University"),
        ("Seoul National University, Seoul 08826, Republic of Korea", "Seoul National University"),
        ("Tsinghua University, Beijing 100084, China", "Tsinghua University"),
        ("Peking University, Beijing, China", "Peking University"),
        ("Fudan University, Shanghai 200433, China", "Fudan University"),
        ("University of Melbourne, Parkville VIC 3010, Australia", "University of Melbourne"),
    ]
    for raw, name in exact_pairs:
        case(raw, [name], "exact")

    # Department prefix; only the institution should match.
    dept_pairs = [
        ("Department of Chemistry, University of Toronto, Toronto, ON M5S 3H6, Canada", "University of Toronto"),
        ("Dept. of Physics, McGill University, Montreal, Canada", "McGill University"),
        ("Department of History, University of Auckland, Auckland 1010, New Zealand", "University of Auckland"),
        ("School of Medicine, Cairo University, Giza, Egypt", "Cairo University"),
        ("Faculty of Law, University of Buenos Aires, Buenos Aires, Argentina", "University of Buenos Aires"),
        ("Dept. of Mathematics, University of Nairobi, Nairobi, Kenya", "University of Nairobi"),
        ("Laboratory of Molecular Biology, Weizmann Institute of Science, Rehovot, Israel", "Weizmann Institute of Science"),
        ("Institute for Theoretical Studies, ETH Zurich, 8092 Zurich, Switzerland", "ETH Zurich"),
        ("Graduate School of Engineering, University of Tokyo, Tokyo 113-8656, Japan", "University of Tokyo"),
        ("Centre for Quantum Devices, University of Copenhagen, Copenhagen, Denmark", "University of Copenhagen"),
        ("Department of Computer Science, Stanford University, Stanford, USA", "Stanford University"),
        ("School of Biological Sciences, University of Cape Town, Cape Town, South Africa", "University of Cape Town"),
        ("Faculty of Science, Charles University, Prague, Czechia", "Charles University"),
        ("Department of Linguistics, University of Vienna, Vienna, Austria", "University of Vienna"),
        ("Institute of Astronomy, University of Cambridge, Madingley Road, Cambridge, UK", "University of Cambridge"),
    ]
    for raw, name in dept_pairs:
        case(raw, [name], "exact")

    # Alias mentions.
    alias_pairs = [
        ("MIT, Cambridge, MA 02139, USA", "Massachusetts Institute of Technology"),
        ("Caltech, Pasadena, CA, USA", "California Institute of Technology"),
        ("UCL, Gower Street, London, UK", "University College London"),
        ("TUM, Munich, Germany", "Technical University of Munich"),
        ("Swiss Federal Institute of Technology Zurich, Zurich, Switzerland", "ETH Zurich"),
        ("TU Delft, Delft, The Netherlands", "Delft University of Technology"),
        ("Moscow State University, Moscow, Russia", "Lomonosov Moscow State University"),
        ("Tokyo University, Bunkyo City, Tokyo, Japan", "University of Tokyo"),
        ("NUS, Singapore 119077", "National University of Singapore"),
        ("ANU, Canberra ACT 0200, Australia", "Australian National University"),
        ("UBC, Vancouver, BC, Canada", "University of British Columbia"),
        ("Universidade de São Paulo, São Paulo, Brazil", "University of São Paulo"),
        ("IISc, Bangalore 560012, India", "Indian Institute of Science"),
        ("IIT Bombay, Powai, Mumbai, India", "Indian Institute of Technology Bombay"),
        ("Scripps Research, La Jolla, CA, USA", "Scripps Research Institute"),
    ]
    for raw, name in alias_pairs:
        case(raw, [name], "exact")

    # Reordered or partly dropped tokens; no exact string available.
    fuzzy_pairs = [
        ("Granada University, Granada, Spain", "University of Granada"),
        ("Oxford University, Oxford, UK", "University of Oxford"),
        ("Helsinki University, Helsinki, Finland", "University of Helsinki"),
        ("University of Technology Delft, Delft, Netherlands", "Delft University of Technology"),
        ("Max Planck Astronomy Institute, Heidelberg, Germany", "Max Planck Institute for Astronomy"),
        ("Max Planck Informatics Institute, Saarbrucken, Germany", "Max Planck Institute for Informatics"),
        ("Melbourne University, Melbourne, Australia", "University of Melbourne"),
        ("Toronto University, Toronto, Canada", "University of Toronto"),
        ("Cambridge University, Cambridge, England", "University of Cambridge"),
        ("Munich Technical University, Munich, Germany", "Technical University of Munich"),
        ("Amsterdam University, Amsterdam, Netherlands", "University of Amsterdam"),
        ("Copenhagen University, Copenhagen, Denmark", "University of Copenhagen"),
        ("Statistics Institute of Grenoble, Grenoble, France", "Grenoble Institute of Statistics"),
        ("Science Institute Weizmann, Rehovot, Israel", "Weizmann Institute of Science"),
        ("Zurich University, Zurich, Switzerland", "University of Zurich"),
    ]
    for raw, name in fuzzy_pairs:
        case(raw, [name], "fuzzy")

    # Multiple institutions in one statement.
    case("University of Granada; University of Helsinki", ["University of Granada", "University of Helsinki"], "multi")
    case("Department of Genetics, Uppsala University; Karolinska Institute, Stockholm, Sweden", ["Uppsala University", "Karolinska Institute"], "multi")
    case("Imperial College London; University College London, London, UK", ["Imperial College London", "University College London"], "multi")
    case("Stanford University, Stanford, CA; MIT, Cambridge, MA", ["Stanford University", "Massachusetts Institute of Technology"], "multi")
    case("Kyoto University, Kyoto; University of Tokyo, Tokyo, Japan", ["Kyoto University", "University of Tokyo"], "multi")

    # Strings that should match nothing.
    none_raws = [
        "Department of Physics",
        "Institute of Advanced Speculation, Atlantis",
        "Initech GmbH, Berlin, Germany",
        "General Hospital of Springfield, Springfield",
        "Independent Researcher",
        "Ministry of Transportation, Oslo, Norway",
        "Centre for Unaffiliated Studies",
        "Acme Corporation, Phoenix, AZ",
        "School of Hard Knocks",
        "Museum of Jurassic Technology, Culver City",
        "Observatory of Public Opinion, Lisbon",
        "Society for Amateur Astronomy",
        "Library of Congress Annex",
        "Foundation for Applied Daydreaming",
        "Freelance Consultant, remote",
        "Springfield Community College",
        "Bureau of Weights, Paris",
        "Laboratory 47",
        "Agency for Rural Affairs, Ankara",
        "Academy of Fine Carpentry, Oslo",
    ]
    for raw in none_raws:
        cases.append({"raw": raw, "expected": [], "kind": "none"})

    # Honest hard cases: labeled with the true institution, but written so
    # the matcher may miss. Misses here count against accuracy.
    hard_pairs = [
        ("Univercity of Granada, Spain", "University of Granada"),  # typo
        ("U. Helsinki", "University of Helsinki"),
        ("MPI Astronomie, Heidelberg", "Max Planck Institute for Astronomy"),
        ("Lomonosov MSU, Moscow", "Lomonosov Moscow State University"),
        ("Scripps, San Diego", "Scripps Research Institute"),
    ]
    for raw, name in hard_pairs:
        case(raw, [name], "hard")

    assert len(cases) == 100, len(cases)
    write_jsonl(FIXTURES / "affiliations_labeled.jsonl", cases)


# --- labeled author corpus --------------------------------------------

FAMILIES = [
    "Almeida", "Bergstrom", "Chen", "Dubois", "Eriksen", "Fontana", "Gupta",
    "Haddad", "Ibarra", "Jansen", "Kowalski", "Lindqvist", "Moreau", "Nakamura",
    "Okafor", "Petrov", "Quispe", "Rossi", "Svensson", "Takahashi", "Ueda",
    "Varga", "Wang", "Ximenes", "Yilmaz", "Zhao", "Muller", "Fernandez",
]
GIVENS = [
    "Ana", "Bjorn", "Carla", "Daniel", "Elena", "Farid", "Grace", "Hiro",
    "Ines", "Jonas", "Katya", "Liam", "Mina", "Noor", "Oscar", "Paula",
    "Quentin", "Rosa", "Stefan", "Tomas", "Ulrike", "Viktor", "Wei", "Yuki",
]

TITLE_WORDS = [
    "measurement", "stability", "networks", "sampling", "inference", "catalysis",
    "resonance", "adaptation", "optimization", "symmetry", "diffusion", "coupling",
    "estimation", "clustering", "segmentation", "propagation", "encoding", "dynamics",
    "equilibrium", "perturbation", "synthesis", "validation", "calibration", "mapping",
]


def _name_variants(given: str, family: str, rng: random.Random) -> list[str]:
    return [
        f"{given} {family}",
        f"{given[0]}. {family}",
        f"{family}, {given}",
    ]


def emit_author_corpus() -> None:
    """Works organized as research groups.

    Every work's authors come from one group and appear in that group's
    venue, so any two records of the same person share at least the venue
    (0.4 name + 0.2 venue clears the threshold) regardless of who led the
    work. Homonym twins sit in different groups with different venues and
    never share coauthors or references, so only the bare name (0.4)
    connects them. Strays are the designed recall losses.
    """
    rng = random.Random(0xAB7)
    venue_pool = VENUES[:10]

    persons: list[dict] = []

    def add_person(given: str, family: str, orcid: str | None) -> dict:
        person = {
            "pid": f"P{len(persons):02d}",
            "given": given,
            "family": family,
            "orcid": orcid,
            "group": None,
        }
        persons.append(person)
        return person

    orcid_count = 0
    used_pairs: set[tuple[str, str]] = set()
    while len(persons) < 37:
        given, family = rng.choice(GIVENS), rng.choice(FAMILIES)
        if (given[0], family) in used_pairs:
            continue
        used_pairs.add((given[0], family))
        orcid = None
        if orcid_count < 15:
            orcid = random_valid_orcid(rng)
            orcid_count += 1
        add_person(given, family, orcid)

    homonym_specs = [
        ("Jonas", "Jakobsen", "Julia", "Jakobsen"),
        ("Mina", "Castellanos", "Marco", "Castellanos"),
        ("Rosa", "Delgado", "Ruben", "Delgado"),
        ("Wei", "Liang", "Wen", "Liang"),
    ]
    homonym_pids: list[tuple[str, str]] = []
    for g1, f1, g2, f2 in homonym_specs:
        a = add_person(g1, f1, None)
        b = add_person(g2, f2, None)
        homonym_pids.append((a["pid"], b["pid"]))

    by_pid = {p["pid"]: p for p in persons}

    def key_of(p: dict) -> tuple[str, str]:
        return (p["given"][0].lower(), p["family"].lower())

    # Deal persons into groups of 3-4, one venue per group. A group holds
    # at most one homonym twin: non-twin name keys are globally unique, so
    # this keeps the coauthor-key sets of any two groups disjoint and no
    # shared-coauthor evidence can link a twin pair.
    twins = {pid for pair in homonym_pids for pid in pair}
    shuffled = persons[:]
    rng.shuffle(shuffled)
    groups: list[dict] = []
    for person in shuffled:
        placed = False
        for group in groups:
            if len(group["members"]) >= group["cap"]:
                continue
            if person["pid"] in twins and any(m["pid"] in twins for m in group["members"]):
                continue
            group["members"].append(person)
            person["group"] = group
            placed = True
            break
        if not placed:
            group = {
                "members": [person],
                "cap": rng.randint(3, 4),
                "venue": len(groups) % len(venue_pool),
                "dois": [],
            }
            person["group"] = group
            groups.append(group)
    for _ in range(len(venue_pool)):
        settled = True
        for a_pid, b_pid in homonym_pids:
            ga, gb = by_pid[a_pid]["group"], by_pid[b_pid]["group"]
            assert ga is not gb
            if ga["venue"] == gb["venue"]:
                gb["venue"] = (gb["venue"] + 1) % len(venue_pool)
                settled = False
        if settled:
            break
    assert all(
        by_pid[a]["group"]["venue"] != by_pid[b]["group"]["venue"]
        for a, b in homonym_pids
    )

    records: list[dict] = []
    serial = 0

    def make_record(
        lead: dict,
        coauthors: list[dict],
        venue_idx: int | None,
        with_orcid: bool,
        refs: list[str],
    ) -> tuple[dict, list[str]]:
        nonlocal serial
        serial += 1
        doi = f"10.5555/au{serial:04d}"
        title = "On " + " and ".join(rng.sample(TITLE_WORDS, 3)) + f" {serial}"
        authors = []
        truth = []
        for idx, person in enumerate([lead, *coauthors]):
            variant = rng.choice(_name_variants(person["given"], person["family"], rng))
            entry: dict = {}
            if "," in variant:
                entry["name"] = variant
            else:
                first, _, last = variant.rpartition(" ")
                entry["given"], entry["family"] = first, last
            if person["orcid"] and (with_orcid if idx == 0 else rng.random() < 0.6):
                entry["ORCID"] = f"https://orcid.org/{person['orcid']}"
            authors.append(entry)
            truth.append(person["pid"])
        record = {
            "DOI": doi,
            "title": [title],
            "type": "journal-article",
            "author": authors,
            "issued": {"date-parts": [[rng.randint(2005, 2024)]]},
        }
        if venue_idx is not None:
            venue = venue_pool[venue_idx]
            record["container-title"] = [venue["name"]]
            record["ISSN"] = list(venue["issns"][:2])
        if refs:
            record["reference"] = [{"DOI": d} for d in refs]
        return record, truth

    for person in persons:
        group = person["group"]
        n_works = rng.randint(2, 4)
        for _ in range(n_works):
            pool = [m for m in group["members"] if m["pid"] != person["pid"]]
            coauthors = rng.sample(pool, min(len(pool), rng.randint(0, 2)))
            with_orcid = person["orcid"] is not None and rng.random() < 0.7
            refs = rng.sample(group["dois"], min(len(group["dois"]), rng.randint(0, 2)))
            record, truth = make_record(person, coauthors, group["venue"], with_orcid, refs)
            records.append({"record": record, "truth": truth})
            group["dois"].append(record["DOI"])

    # Strays: solo record in a venue nobody else uses, no coauthors, no
    # references, no ORCID. The pipeline is expected to split these; the
    # fixture keeps them so recall is measured honestly.
    stray_people = [p for p in persons if p["orcid"] is None and p["pid"] not in twins]
    for person in rng.sample(stray_people, 4):
        record, truth = make_record(person, [], None, False, [])
        record["container-title"] = ["Obscure Regional Bulletin"]
        records.append({"record": record, "truth": truth, "stray": True})

    rng.shuffle(records)
    n_slots = sum(len(rec["truth"]) for rec in records)
    n_orcid_slots = sum(
        1
        for rec in records
        for a in rec["record"]["author"]
        if "ORCID" in a
    )
    print(f"author corpus: {len(records)} records, {n_slots} author slots, {n_orcid_slots} with ORCID")
    assert n_slots >= 200
    write_jsonl(FIXTURES / "authors_labeled.jsonl", records)


# --- dedup / VoR corpus -----------------------------------------------

PAIR_TITLES = [
    ("Spectral Bounds for Random Lattices", "spectral bounds for random lattices!"),
    ("A Naïve Approach to Schrödinger Operators", "A Naive Approach to Schrodinger Operators"),
    ("Deep Learning—A Critical Survey", "deep learning: a critical survey"),
    ("Graph Coloring, Revisited", "GRAPH COLORING REVISITED"),
    ("On the Décomposition of Sparse Matrices", "On the Decomposition of Sparse Matrices"),
    ("Entropy and Order in Granular Media", "Entropy, and Order in Granular Media!"),
    ("Carbon Fluxes in Boreal Forests: A Meta-Analysis", "Carbon fluxes in boreal forests; a meta analysis"),
    ("Synthesis of Chiral Ligands (Second Series)", "synthesis of chiral ligands second series"),
    ("Quantum Walks on Cayley Graphs", "QUANTUM WALKS ON CAYLEY GRAPHS."),
    ("Bayesian Estimation under Censoring", "bayesian estimation under censoring"),
    ("The Rôle of Noise in Gene Expression", "The Role of Noise in Gene Expression"),
    ("Stability of Coupled Oscillators — Part II", "Stability of coupled oscillators, part ii"),
    ("Microbial Diversity in Alpine Soils", "MICROBIAL DIVERSITY IN ALPINE SOILS"),
    ("A Fast Algorithm for Minimum Cuts", "a fast algorithm for minimum cuts"),
    ("Renormalization in Curved Space-Times", "renormalization in curved space times"),
    ("Crowd-Sourced Mapping of Urban Heat", "Crowd sourced mapping of urban heat…"),
    ("Protein Folding via Coarse-Grained Models", "protein folding via coarse grained models"),
    ("Éléments of Statistical Topology", "Elements of Statistical Topology"),
    ("Semi-Supervised Parsing with Latent Trees", "Semi supervised parsing with latent trees"),
    ("Magnetic Ordering in Thin Films", "magnetic ordering in thin films?"),
]

PAIR_AUTHORS = [
    ("Nadia", "Rahimi"), ("Piotr", "Sokolov"), ("Emma", "Lindgren"), ("Kenji", "Mori"),
    ("Lucia", "Bianchi"), ("Aarav", "Mehta"), ("Sofia", "Novak"), ("Mateus", "Costa"),
    ("Hana", "Sato"), ("Igor", "Melnik"), ("Clara", "Weiss"), ("Diego", "Morales"),
    ("Lea", "Fischer"), ("Tariq", "Aziz"), ("Maja", "Horvat"), ("Ravi", "Iyer"),
    ("Alba", "Serra"), ("Omar", "Khalil"), ("Vera", "Lukic"), ("Finn", "Berg"),
]


def emit_dedup_corpus() -> None:
    rng = random.Random(0xDED)
    from openindex.disambig import fingerprint_work, normalize_name, family_token

    journal = VENUES[0]
    archive_name = "Preprint Archive"
    rows: list[dict] = []
    fingerprints: dict[str, str] = {}

    def fp(title: str, given: str, family: str) -> str:
        return fingerprint_work(title, family_token(normalize_name(f"{given} {family}")))

    for i, ((vor_title, pre_title), (given, family)) in enumerate(
        zip(PAIR_TITLES, PAIR_AUTHORS)
    ):
        group = f"pair{i:02d}"
        doi = f"10.6000/vor{i:03d}"
        author = [{"given": given, "family": family}]
        vor = {
            "DOI": doi,
            "title": [vor_title],
            "type": "journal-article",
            "author": author,
            "container-title": [journal["name"]],
            "ISSN": list(journal["issns"][:1]),
            "issued": {"date-parts": [[2021]]},
        }
        pre = {
            "title": [pre_title],
            "type": "posted-content",
            "author": author,
            "container-title": [archive_name],
            "issued": {"date-parts": [[2020]]},
            "URL": f"https://preprints.example/abs/{i:03d}",
        }
        key = fp(vor_title, given, family)
        assert fp(pre_title, given, family) == key, group
        assert key not in fingerprints, (group, fingerprints.get(key))
        fingerprints[key] = group
        first = {"record": vor, "source": "crossref", "group": group, "role": "vor"}
        second = {"record": pre, "source": "repository", "group": group, "role": "preprint"}
        if rng.random() < 0.5:
            first, second = second, first
        rows.extend([first, second])

    # Decoys: half reuse a pair title with a different first author, half
    # change one content word. None may share a fingerprint with anything.
    for i in range(20):
        group = f"decoy{i:02d}"
        if i < 10:
            title = PAIR_TITLES[i][0]
            given, family = PAIR_AUTHORS[(i + 7) % 20]
            family = family + "son"
        else:
            base_title, _ = PAIR_TITLES[i]
            words = base_title.split()
            words[-1] = "Reconsidered"
            title = " ".join(words)
            given, family = PAIR_AUTHORS[i]
        record = {
            "DOI": f"10.6000/decoy{i:03d}",
            "title": [title],
            "type": "journal-article",
            "author": [{"given": given, "family": family}],
            "container-title": [journal["name"]],
            "ISSN": list(journal["issns"][:1]),
            "issued": {"date-parts": [[2022]]},
        }
        key = fp(title, given, family)
        assert key not in fingerprints, (group, fingerprints[key])
        fingerprints[key] = group
        rows.append({"record": record, "source": "crossref", "group": group, "role": "decoy"})

    rng.shuffle(rows)
    assert len(rows) == 60
    write_jsonl(FIXTURES / "dedup_corpus.jsonl", rows)


# --- small CLI fixtures -----------------------------------------------

def emit_crossref_10() -> None:
    rng = random.Random(0xC10)
    venue_a, venue_b = VENUES[1], VENUES[2]
    rows = []
    for i in range(10):
        venue = venue_a if i % 2 == 0 else venue_b
        record = {
            "DOI": f"10.7000/cr{i:02d}",
            "title": [f"Calibration Study {i}: " + " ".join(rng.sample(TITLE_WORDS, 2))],
            "type": "journal-article",
            "author": [
                {"given": rng.choice(GIVENS), "family": rng.choice(FAMILIES)},
                {"given": rng.choice(GIVENS), "family": rng.choice(FAMILIES)},
            ],
            "container-title": [venue["name"]],
            "ISSN": list(venue["issns"][:1]),
            "issued": {"date-parts": [[2010 + i]]},
        }
        if i >= 5:
            record["reference"] = [{"DOI": f"10.7000/cr{i - 5:02d}"}]
        rows.append(record)
    write_jsonl(FIXTURES / "crossref_10.jsonl", rows)


PUBMED_XML = """<?xml version="1.0" encoding="UTF-8"?>
<PubmedArticleSet>
  <PubmedArticle>
    <MedlineCitation>
      <PMID Version="1">900001</PMID>
      <Article>
        <Journal>
          <ISSN IssnType="Print">{issn_a}</ISSN>
          <Title>Review of Computational Biology</Title>
          <JournalIssue><PubDate><Year>2018</Year><Month>Mar</Month></PubDate></JournalIssue>
        </Journal>
        <ArticleTitle>Expression atlases for vertebrate tissue panels</ArticleTitle>
        <Abstract>
          <AbstractText>We profile gene expression across twelve tissues.</AbstractText>
        </Abstract>
        <AuthorList>
          <Author>
            <LastName>Okafor</LastName>
            <ForeName>Grace</ForeName>
            <Identifier Source="ORCID">https://orcid.org/{orcid_a}</Identifier>
            <AffiliationInfo><Affiliation>University of Granada, 18071 Granada, Spain</Affiliation></AffiliationInfo>
          </Author>
          <Author>
            <LastName>Petrov</LastName>
            <ForeName>Viktor</ForeName>
          </Author>
        </AuthorList>
        <PublicationTypeList><PublicationType>Journal Article</PublicationType></PublicationTypeList>
        <ELocationID EIdType="doi" ValidYN="Y">10.8000/pm900001</ELocationID>
      </Article>
    </MedlineCitation>
    <PubmedData>
      <ReferenceList>
        <Reference>
          <ArticleIdList><ArticleId IdType="doi">10.7000/cr03</ArticleId></ArticleIdList>
        </Reference>
        <Reference>
          <ArticleIdList><ArticleId IdType="pubmed">123456</ArticleId></ArticleIdList>
        </Reference>
      </ReferenceList>
    </PubmedData>
  </PubmedArticle>
  <PubmedArticle>
    <MedlineCitation>
      <PMID Version="1">900002</PMID>
      <Article>
        <Journal>
          <ISSN IssnType="Electronic">{issn_b}</ISSN>
          <Title>Data Curation Quarterly</Title>
          <JournalIssue><PubDate><MedlineDate>2019 Nov-Dec</MedlineDate></PubDate></JournalIssue>
        </Journal>
        <ArticleTitle>Registry linkage under incomplete identifiers</ArticleTitle>
        <AuthorList>
          <Author>
            <CollectiveName>Registry Linkage Consortium</CollectiveName>
          </Author>
          <Author>
            <LastName>Jansen</LastName>
            <ForeName>Ines</ForeName>
          </Author>
        </AuthorList>
        <PublicationTypeList><PublicationType>Journal Article</PublicationType></PublicationTypeList>
      </Article>
    </MedlineCitation>
  </PubmedArticle>
  <PubmedArticle>
    <MedlineCitation>
      <PMID Version="1">900003</PMID>
      <Article>
        <Journal>
          <Title>Bulletin of Metadata Studies</Title>
          <JournalIssue><PubDate><Year>2021</Year></PubDate></JournalIssue>
        </Journal>
        <ArticleTitle>A thesaurus for specimen digitization</ArticleTitle>
        <AuthorList>
          <Author>
            <LastName>Quispe</LastName>
            <ForeName>Rosa</ForeName>
          </Author>
        </AuthorList>
        <PublicationTypeList><PublicationType>Review</PublicationType></PublicationTypeList>
        <ELocationID EIdType="doi" ValidYN="Y">10.8000/pm900003</ELocationID>
      </Article>
    </MedlineCitation>
  </PubmedArticle>
  <PubmedArticle>
    <MedlineCitation>
      <PMID Version="1">900004</PMID>
      <Article>
        <Journal>
          <ISSN IssnType="Print">{issn_a}</ISSN>
          <Title>Review of Computational Biology</Title>
          <JournalIssue><PubDate><Year>2020</Year></PubDate></JournalIssue>
        </Journal>
        <ArticleTitle>Benchmarking variant callers on synthetic pedigrees</ArticleTitle>
        <AuthorList>
          <Author>
            <LastName>Okafor</LastName>
            <ForeName>G.</ForeName>
          </Author>
        </AuthorList>
        <PublicationTypeList><PublicationType>Journal Article</PublicationType></PublicationTypeList>
        <ELocationID EIdType="doi" ValidYN="Y">10.8000/pm900004</ELocationID>
      </Article>
    </MedlineCitation>
  </PubmedArticle>
</PubmedArticleSet>
"""


def emit_pubmed_sample() -> None:
    rng = random.Random(0x9B)
    xml = PUBMED_XML.format(
        issn_a=VENUES[3]["issns"][0],
        issn_b=VENUES[2]["issns"][1],
        orcid_a=random_valid_orcid(rng),
    )
    path = FIXTURES / "pubmed_sample.xml"
    path.write_text(xml, encoding="utf-8")
    print(f"wrote {path.name}")


def emit_venues_sidecar() -> None:
    """Venue pool in machine-readable form so tests agree with the
    generator about names and ISSN groups."""
    rows = [
        {"name": v["name"], "issns": v["issns"], "linked": v["linked"]} for v in VENUES
    ]
    write_jsonl(FIXTURES / "venues_pool.jsonl", rows)


def main() -> None:
    emit_issn_linking()
    emit_tree_toy()
    emit_tree_full_shape()
    rors = emit_institutions()
    emit_affiliations(rors)
    emit_author_corpus()
    emit_dedup_corpus()
    emit_crossref_10()
    emit_pubmed_sample()
    emit_venues_sidecar()


if __name__ == "__main__":
    main()
