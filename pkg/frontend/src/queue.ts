// Offline outbox: visits (and new patients) entered without connectivity
// wait here and drain to the server in order once it is reachable. Every
// queued record carries a client UUID, so a retry after a lost response
// cannot duplicate anything server-side.

import type { ApiClient } from './api.js';
import { ApiError } from './api.js';
import type { Patient, VisitIn } from './types.js';

export interface QueueEntry {
    kind: 'patient' | 'visit';
    patientId?: string;
    doc: Record<string, unknown>;
}

export interface QueueStorage {
    load(): QueueEntry[];
    save(entries: QueueEntry[]): void;
}

export class MemoryStorage implements QueueStorage {
    private entries: QueueEntry[] = [];
    load(): QueueEntry[] {
        return [...this.entries];
    }
    save(entries: QueueEntry[]): void {
        this.entries = [...entries];
    }
}

const STORAGE_KEY = 'medgraph.outbox';

export class BrowserStorage implements QueueStorage {
    load(): QueueEntry[] {
        const raw = window.localStorage.getItem(STORAGE_KEY);
        return raw ? (JSON.parse(raw) as QueueEntry[]) : [];
    }
    save(entries: QueueEntry[]): void {
        window.localStorage.setItem(STORAGE_KEY, JSON.stringify(entries));
    }
}

export interface DrainResult {
    sent: number;
    rejected: number;
    remaining: number;
}

export class OfflineQueue {
    private entries: QueueEntry[];

    constructor(private storage: QueueStorage = new MemoryStorage()) {
        this.entries = storage.load();
    }

    get pending(): QueueEntry[] {
        return [...this.entries];
    }

    get size(): number {
        return this.entries.length;
    }

    enqueuePatient(patient: Patient): void {
        this.entries.push({ kind: 'patient', doc: { ...patient } });
        this.storage.save(this.entries);
    }

    enqueueVisit(patientId: string, visit: VisitIn & { id: string }): void {
        this.entries.push({ kind: 'visit', patientId, doc: { ...visit } });
        this.storage.save(this.entries);
    }

    /**
     * Push entries in order. Stops at the first network failure (entry
     * stays queued for the next attempt); a 4xx rejection drops the entry
     * so one bad record cannot wedge the queue.
     */
    async drain(api: ApiClient): Promise<DrainResult> {
        let sent = 0;
        let rejected = 0;
        while (this.entries.length > 0) {
            const entry = this.entries[0];
            try {
                if (entry.kind === 'patient') {
                    await api.createPatient(entry.doc as never);
                } else {
                    await api.addVisit(entry.patientId as string, entry.doc as never);
                }
                sent += 1;
            } catch (err) {
                if (err instanceof ApiError && err.status >= 400 && err.status < 500) {
                    rejected += 1;
                } else {
                    break; // still offline: keep the entry, try later
                }
            }
            this.entries.shift();
            this.storage.save(this.entries);
        }
        return { sent, rejected, remaining: this.entries.length };
    }
}
