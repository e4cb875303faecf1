// View-model for the single-page app: selected patient, active chart tab,
// palette, loaded annotations, point inspection, and outbox badge. Pure
// state + notifications; DOM wiring lives in app.ts so this file is fully
// unit-testable.

import { DEFAULT_INSPECT_FIELDS, InspectModel, inspectModel } from './inspect.js';
import type { ChartOut, Indicator, Patient, PointAnnotation, Recommendation } from './types.js';
import { INDICATORS } from './types.js';

export interface ChartKey {
    patientId: string;
    indicator: Indicator;
    palette: string;
}

export type Listener = () => void;

export class AppState {
    patients: Patient[] = [];
    selectedPatientId: string | null = null;
    activeTab: Indicator = 'weight-for-age';
    palette = 'passport';
    configuredFields: readonly string[] = DEFAULT_INSPECT_FIELDS;
    annotations: PointAnnotation[] = [];
    chartWarnings: string[] = [];
    inspected: InspectModel | null = null;
    recommendation: Recommendation | null = null;
    pendingCount = 0;

    private listeners: Listener[] = [];

    subscribe(listener: Listener): () => void {
        this.listeners.push(listener);
        return () => {
            this.listeners = this.listeners.filter((l) => l !== listener);
        };
    }

    private notify(): void {
        for (const listener of this.listeners) listener();
    }

    setPatients(patients: Patient[]): void {
        this.patients = patients;
        this.notify();
    }

    selectPatient(id: string | null): void {
        this.selectedPatientId = id;
        this.annotations = [];
        this.inspected = null;
        this.recommendation = null;
        this.notify();
    }

    get selectedPatient(): Patient | null {
        return this.patients.find((p) => p.id === this.selectedPatientId) ?? null;
    }

    /** Tabs switch only through here (the tab bar), never by chart gestures. */
    setTab(indicator: Indicator): void {
        if (!INDICATORS.includes(indicator)) {
            throw new Error(`unknown chart tab: ${indicator}`);
        }
        this.activeTab = indicator;
        this.inspected = null;
        this.notify();
    }

    setPalette(palette: string): void {
        this.palette = palette;
        this.notify();
    }

    setConfiguredFields(fields: string[]): void {
        this.configuredFields = fields.slice(0, 4);
        this.notify();
    }

    /** What the chart pane should be showing; null when no patient picked. */
    chartKey(): ChartKey | null {
        if (!this.selectedPatientId) return null;
        return { patientId: this.selectedPatientId, indicator: this.activeTab, palette: this.palette };
    }

    chartLoaded(chart: ChartOut): void {
        this.annotations = chart.annotations;
        this.chartWarnings = chart.warnings;
        this.notify();
    }

    recommendationLoaded(rec: Recommendation | null): void {
        this.recommendation = rec;
        this.notify();
    }

    /** Tap on the k-th data point; a tap elsewhere clears the panel. */
    inspectPoint(pointIndex: number | null): void {
        if (pointIndex === null) {
            this.inspected = null;
            this.notify();
            return;
        }
        const annotation = this.annotations.find((a) => a.point_index === pointIndex);
        this.inspected = annotation ? inspectModel(annotation, this.configuredFields) : null;
        this.notify();
    }

    setPendingCount(count: number): void {
        this.pendingCount = count;
        this.notify();
    }
}
