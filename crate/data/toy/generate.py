"""Regenerates train.jsonl and test.jsonl. Output is fixed by the seed."""
import json
import random

rng = random.Random(20240611)

TEAMS = ["Belfast Giants", "Fife Flyers", "Cardiff Devils", "Sheffield Steelers", "Dundee Stars",
         "Glasgow Clan", "Nottingham Panthers", "Coventry Blaze", "Guildford Flames", "Manchester Storm"]
PEOPLE = ["Sarah Jones", "David Clarke", "Amir Khan", "Mary Walsh", "Tom Brennan", "Lucy Grant",
          "Owen Price", "Nina Patel", "Peter Hughes", "Grace Lee"]
CITIES = ["Belfast", "Cardiff", "Glasgow", "Leeds", "Bristol", "York", "Swansea", "Derby", "Dundee", "Exeter"]
ORGS = ["Art Fund", "National Trust", "Royal Society", "City Council", "Met Office", "Arts Council"]
THINGS = ["library", "bridge", "museum", "stadium", "hospital", "school", "theatre", "station"]

SUMMARIES = [
    "{team} beat {team2} {a}-{b} to move top of the league in the {season} season.",
    "{person} has been appointed as the new head of the {org} in {city}.",
    "A new {thing} in {city} has been opened after a {money} refurbishment.",
    "Police in {city} are investigating after a man was injured in an attack on {day}.",
    "{person} said the {org} would review its plans for the {thing} by {year}.",
    "The {thing} in {city}, completed in {old}, is to be restored with help from the {org}.",
    "{team} have signed forward {person} on a two-year deal ahead of the {season} season.",
    "Plans for a {money} {thing} in {city} have been approved by the {org}.",
    "Flooding has closed the {thing} in {city} for the second time since {year}.",
    "{person} from {city} has won a national award for work with the {org}.",
]

NOVEL = [
    "Residents gathered on {day} to celebrate the anniversary of the {thing} in {city}.",
    "Ticket prices at the {thing} will rise by {pct} next month, managers confirmed.",
    "Volunteers have spent {n} weeks clearing litter along the coast near {city}.",
    "An unusual bird spotted near {city} has drawn crowds of watchers from across the country.",
    "Engineers are testing a quieter design for trams serving {city} and nearby towns.",
]

FILLER = [
    "Officials said further details would be released in due course.",
    "The announcement was welcomed by local groups.",
    "Work is expected to take several months.",
    "A spokesperson declined to comment further.",
    "Many people attended the event despite the weather.",
    "The decision followed a lengthy public consultation.",
]

DAYS = ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"]


def slots():
    year = rng.randint(2015, 2023)
    t1, t2 = rng.sample(TEAMS, 2)
    return {
        "team": t1, "team2": t2, "a": rng.randint(2, 6), "b": rng.randint(0, 1),
        "season": f"{year}-{(year + 1) % 100:02d}", "person": rng.choice(PEOPLE),
        "org": rng.choice(ORGS), "city": rng.choice(CITIES), "thing": rng.choice(THINGS),
        "money": f"£{rng.randint(2, 40)}m", "day": rng.choice(DAYS), "year": year,
        "old": rng.randint(1550, 1899), "pct": f"{rng.randint(3, 15)}%", "n": rng.randint(2, 9),
    }


def document(summary, s, drop):
    facts = [
        f"The report was published in {s['city']} on {s['day']}.",
        f"{s['person']} spoke to reporters after the meeting.",
        f"The {s['org']} has been involved since {s['year']}.",
        f"Supporters of {s['team']} travelled in large numbers.",
        f"The {s['thing']} was first completed in {s['old']}.",
    ]
    body = [summary.replace("has been", "was").replace("have been", "were")]
    body += rng.sample(facts, 3) + rng.sample(FILLER, 3)
    if drop:
        body = body[1:]
    rng.shuffle(body)
    return " ".join(body)


def record(i, prefix, novel_share, drop_share):
    s = slots()
    if rng.random() < novel_share:
        summary = rng.choice(NOVEL).format(**s)
    else:
        summary = rng.choice(SUMMARIES).format(**s)
    return {"id": f"{prefix}{i:04d}", "document": document(summary, s, rng.random() < drop_share), "summary": summary}


def write(path, rows):
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


write("train.jsonl", [record(i, "tr", 0.0, 0.2) for i in range(240)])
write("test.jsonl", [record(i, "te", 0.35, 0.3) for i in range(60)])
