// Client-side validation for the entry forms: catches invariant
// violations (bad dates, non-positive measures) before anything is sent
// or queued. The server enforces the same rules again.

import type { VisitIn } from './types.js';

export interface PatientForm {
    name: string;
    sex: string;
    birth_date: string;
}

export interface VisitForm {
    date: string;
    weight?: string;
    height?: string;
    muac?: string;
    oedema?: string;
    note?: string;
}

const OEDEMA_CODES: Record<string, number> = { none: 0, '+': 1, '++': 2, '+++': 3 };

function isIsoDate(value: string): boolean {
    return /^\d{4}-\d{2}-\d{2}$/.test(value) && !Number.isNaN(Date.parse(value));
}

export function validatePatient(form: PatientForm): string[] {
    const errors: string[] = [];
    if (!form.name.trim()) errors.push('name is required');
    if (form.sex !== 'female' && form.sex !== 'male') errors.push('sex must be female or male');
    if (!isIsoDate(form.birth_date)) {
        errors.push('birth date must be a valid date');
    } else if (Date.parse(form.birth_date) > Date.now()) {
        errors.push('birth date cannot be in the future');
    }
    return errors;
}

export interface VisitValidation {
    errors: string[];
    visit: Omit<VisitIn, 'id'> | null;
}

export function validateVisit(form: VisitForm, birthDate: string): VisitValidation {
    const errors: string[] = [];
    if (!isIsoDate(form.date)) {
        errors.push('visit date must be a valid date');
    } else if (Date.parse(form.date) < Date.parse(birthDate)) {
        errors.push('visit date is before the birth date');
    }
    const measures: Record<string, number> = {};
    const numeric: [string, string | undefined][] = [
        ['weight_kg', form.weight],
        ['height_cm', form.height],
        ['muac_cm', form.muac],
    ];
    for (const [key, raw] of numeric) {
        if (raw === undefined || raw.trim() === '') continue;
        const value = Number(raw);
        if (!Number.isFinite(value) || value <= 0) {
            errors.push(`${key} must be a positive number`);
        } else {
            measures[key] = value;
        }
    }
    if (form.oedema && form.oedema !== 'none') {
        const code = OEDEMA_CODES[form.oedema];
        if (code === undefined) {
            errors.push('oedema grade must be none, +, ++ or +++');
        } else {
            measures.oedema = code;
        }
    }
    if (Object.keys(measures).length === 0) {
        errors.push('enter at least one measurement');
    }
    if (errors.length > 0) return { errors, visit: null };
    return { errors: [], visit: { date: form.date, measures, note: form.note || null } };
}
