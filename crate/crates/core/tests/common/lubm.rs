//! A university-benchmark-shaped graph of about two thousand triples.
//!
//! Department0 of University0 is also an Institute and has no professor
//! interested in Research2, so the Q2-style query below fails on it while
//! other departments, institutes and University0 departments do have such
//! professors.

use rand::seq::SliceRandom;
use rand::Rng;

use kg_reform::query::{parse_query, BgpQuery};
use kg_reform::rdf::{vocab, Term, Triple};

use super::random::rng;

pub const UB: &str = "http://lubm.example/onto#";

pub const UNIVERSITIES: usize = 3;
pub const DEPARTMENTS: usize = 5;
/// (University, Department) pairs that are also institutes.
pub const INSTITUTES: [(usize, usize); 2] = [(0, 0), (1, 2)];

fn ub(local: &str) -> Term {
    Term::named(&format!("{UB}{local}"))
}

pub fn university(u: usize) -> String {
    format!("http://www.University{u}.edu")
}

pub fn department(u: usize, d: usize) -> String {
    format!("http://www.Department{d}.University{u}.edu")
}

struct Out(Vec<Triple>);

impl Out {
    fn add(&mut self, s: &Term, p: &str, o: Term) {
        self.0.push(Triple::new(s.clone(), ub(p), o).unwrap());
    }

    fn typed(&mut self, s: &Term, class: &str) {
        self.0
            .push(Triple::new(s.clone(), Term::named(vocab::RDF_TYPE), ub(class)).unwrap());
    }

    fn schema(&mut self, sub: &str, rel: &str, sup: &str) {
        self.0
            .push(Triple::new(ub(sub), Term::named(rel), ub(sup)).unwrap());
    }
}

pub fn generate(seed: u64) -> Vec<Triple> {
    let mut rng = rng(seed);
    let mut out = Out(Vec::new());
    for (sub, sup) in [
        ("FullProfessor", "Professor"),
        ("AssociateProfessor", "Professor"),
        ("Professor", "Faculty"),
        ("Lecturer", "Faculty"),
        ("Faculty", "Employee"),
        ("GraduateStudent", "Student"),
        ("UndergraduateStudent", "Student"),
        ("GraduateCourse", "Course"),
        ("Course", "Work"),
        ("University", "Organization"),
        ("Department", "Organization"),
        ("Institute", "Organization"),
    ] {
        out.schema(sub, vocab::RDFS_SUBCLASS_OF, sup);
    }
    out.schema("headOf", vocab::RDFS_SUBPROPERTY_OF, "worksFor");

    for u in 0..UNIVERSITIES {
        let univ = Term::named(&university(u));
        out.typed(&univ, "University");
        out.add(&univ, "name", Term::literal(format!("University{u}")));
    }

    for u in 0..UNIVERSITIES {
        for d in 0..DEPARTMENTS {
            let dept_iri = department(u, d);
            let dept = Term::named(&dept_iri);
            out.typed(&dept, "Department");
            if INSTITUTES.contains(&(u, d)) {
                out.typed(&dept, "Institute");
            }
            out.add(&dept, "name", Term::literal(format!("Department{d}")));
            out.add(&dept, "subOrganizationOf", Term::named(&university(u)));

            let mut courses = Vec::new();
            for c in 0..4 {
                let course = Term::named(&format!("{dept_iri}/Course{c}"));
                out.typed(
                    &course,
                    if c % 2 == 0 {
                        "Course"
                    } else {
                        "GraduateCourse"
                    },
                );
                out.add(&course, "name", Term::literal(format!("Course{c}")));
                courses.push(course);
            }

            let ranks = [
                ("FullProfessor", 3),
                ("AssociateProfessor", 3),
                ("Lecturer", 2),
            ];
            let mut index = 0;
            for (class, count) in ranks {
                for i in 0..count {
                    let person_iri = format!("{dept_iri}/{class}{i}");
                    let person = Term::named(&person_iri);
                    out.typed(&person, class);
                    if class == "FullProfessor" && i == 0 {
                        out.add(&person, "headOf", dept.clone());
                    }
                    out.add(&person, "worksFor", dept.clone());
                    out.add(&person, "name", Term::literal(format!("{class}{i}")));
                    out.add(
                        &person,
                        "emailAddress",
                        Term::literal(format!("{class}{i}@Department{d}.University{u}.edu")),
                    );
                    out.add(
                        &person,
                        "telephone",
                        Term::literal(format!("{u}{d}{index:02}")),
                    );
                    let mut interest = rng.gen_range(0..8);
                    // Research2 is planted on the second professor of every
                    // department except Department0.University0.
                    if (u, d) == (0, 0) {
                        if interest == 2 {
                            interest = 3;
                        }
                    } else if class != "Lecturer" && index == 1 {
                        interest = 2;
                    }
                    out.add(
                        &person,
                        "researchInterest",
                        Term::literal(format!("Research{interest}")),
                    );
                    let degree = rng.gen_range(0..UNIVERSITIES);
                    out.add(
                        &person,
                        "doctoralDegreeFrom",
                        Term::named(&university(degree)),
                    );
                    out.add(&person, "teacherOf", courses[index % courses.len()].clone());
                    index += 1;
                }
            }

            for s in 0..7 {
                let grad = s % 3 == 0;
                let class = if grad {
                    "GraduateStudent"
                } else {
                    "UndergraduateStudent"
                };
                let student = Term::named(&format!("{dept_iri}/{class}{s}"));
                out.typed(&student, class);
                out.add(&student, "memberOf", dept.clone());
                out.add(&student, "name", Term::literal(format!("{class}{s}")));
                out.add(
                    &student,
                    "emailAddress",
                    Term::literal(format!("{class}{s}@Department{d}.University{u}.edu")),
                );
                out.add(
                    &student,
                    "telephone",
                    Term::literal(format!("{u}{d}{s:02}9")),
                );
                for course in courses.choose_multiple(&mut rng, 2) {
                    out.add(&student, "takesCourse", course.clone());
                }
                if grad {
                    let adviser = rng.gen_range(0..6);
                    let (class, i) = if adviser < 3 {
                        ("FullProfessor", adviser)
                    } else {
                        ("AssociateProfessor", adviser - 3)
                    };
                    out.add(
                        &student,
                        "advisor",
                        Term::named(&format!("{dept_iri}/{class}{i}")),
                    );
                    out.add(
                        &student,
                        "undergraduateDegreeFrom",
                        Term::named(&university(rng.gen_range(0..UNIVERSITIES))),
                    );
                }
            }
        }
    }
    out.0
}

/// `?X a Professor . ?X worksFor Department0.University0 .
/// ?X researchInterest 'Research2' . ?X doctoralDegreeFrom ?Y`
pub fn q2() -> BgpQuery {
    parse_query(&format!(
        "PREFIX ub: <{UB}>
         SELECT ?X ?Y WHERE {{
           ?X a ub:Professor .
           ?X ub:worksFor <{}> .
           ?X ub:researchInterest \"Research2\" .
           ?X ub:doctoralDegreeFrom ?Y .
         }}",
        department(0, 0)
    ))
    .expect("Q2 parses")
}
