//! Long date formats per locale. Input dates are ISO `YYYY-MM-DD`.

use alloc::format;
use alloc::string::String;

use crate::locale::Locale;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Date {
    pub year: i32,
    pub month: u8,
    pub day: u8,
}

impl Date {
    pub fn parse_iso(s: &str) -> Option<Date> {
        let mut it = s.splitn(3, '-');
        let (y, m, d) = (it.next()?, it.next()?, it.next()?);
        if y.len() != 4 || m.len() != 2 || d.len() != 2 {
            return None;
        }
        let date = Date {
            year: y.parse().ok()?,
            month: m.parse().ok()?,
            day: d.parse().ok()?,
        };
        (1..=12).contains(&date.month).then_some(())?;
        (1..=days_in_month(date.year, date.month))
            .contains(&date.day)
            .then_some(date)
    }
}

fn days_in_month(year: i32, month: u8) -> u8 {
    match month {
        2 if (year % 4 == 0 && year % 100 != 0) || year % 400 == 0 => 29,
        2 => 28,
        4 | 6 | 9 | 11 => 30,
        _ => 31,
    }
}

const EN: [&str; 12] = [
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];
const DE: [&str; 12] = [
    "Januar",
    "Februar",
    "März",
    "April",
    "Mai",
    "Juni",
    "Juli",
    "August",
    "September",
    "Oktober",
    "November",
    "Dezember",
];
const ES: [&str; 12] = [
    "enero",
    "febrero",
    "marzo",
    "abril",
    "mayo",
    "junio",
    "julio",
    "agosto",
    "septiembre",
    "octubre",
    "noviembre",
    "diciembre",
];
const FR: [&str; 12] = [
    "janvier",
    "février",
    "mars",
    "avril",
    "mai",
    "juin",
    "juillet",
    "août",
    "septembre",
    "octobre",
    "novembre",
    "décembre",
];
const PT: [&str; 12] = [
    "janeiro",
    "fevereiro",
    "março",
    "abril",
    "maio",
    "junho",
    "julho",
    "agosto",
    "setembro",
    "outubro",
    "novembro",
    "dezembro",
];
// Genitive month names, as used in dates.
const PL: [&str; 12] = [
    "stycznia",
    "lutego",
    "marca",
    "kwietnia",
    "maja",
    "czerwca",
    "lipca",
    "sierpnia",
    "września",
    "października",
    "listopada",
    "grudnia",
];
const SL: [&str; 12] = [
    "januar",
    "februar",
    "marec",
    "april",
    "maj",
    "junij",
    "julij",
    "avgust",
    "september",
    "oktober",
    "november",
    "december",
];

pub fn format_long(date: Date, locale: Locale) -> String {
    let m = usize::from(date.month - 1);
    let (y, d) = (date.year, date.day);
    match locale {
        Locale::EnUs => format!("{} {d}, {y}", EN[m]),
        Locale::DeDe => format!("{d:02}. {} {y}", DE[m]),
        Locale::EsEs => format!("{d} de {} de {y}", ES[m]),
        Locale::FrFr => format!("{d} {} {y}", FR[m]),
        Locale::PtBr => format!("{d} de {} de {y}", PT[m]),
        Locale::PlPl => format!("{d} {} {y}", PL[m]),
        Locale::SlSi => format!("{d}. {} {y}", SL[m]),
        Locale::ZhCn => format!("{y}年{}月{d}日", date.month),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn english_and_german_long_dates() {
        let d = Date::parse_iso("2015-01-01").unwrap();
        assert_eq!(format_long(d, Locale::EnUs), "January 1, 2015");
        assert_eq!(format_long(d, Locale::DeDe), "01. Januar 2015");
        assert_eq!(format_long(d, Locale::ZhCn), "2015年1月1日");
    }

    #[test]
    fn rejects_bad_dates() {
        assert!(Date::parse_iso("2015-02-29").is_none());
        assert!(Date::parse_iso("2016-02-29").is_some());
        assert!(Date::parse_iso("2015-13-01").is_none());
        assert!(Date::parse_iso("January 1").is_none());
    }
}
